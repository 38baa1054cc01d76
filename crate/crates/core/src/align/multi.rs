//! Multiple alignments: one New pattern against rows of Old patterns.
//!
//! An alignment is stored as its set of *columns*: groups of two or more
//! cells, at most one per row, all carrying the same symbol text. Rows keep
//! their own symbol order, and the columns plus every row's internal order
//! induce a partial order that must linearize — the alignment's
//! left-to-right column order. Where the partial order leaves the
//! interleaving open, linearization breaks ties toward the row listed
//! first (the New row, then Old rows in insertion order).
//!
//! Scoring is the compression difference `CD = B_new - B_code`: the bits of
//! New symbols the alignment accounts for, minus the bits of the code it
//! derives. The code is the sequence of identification and boundary
//! symbols of the Old rows left unlinked, read in column order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pattern::PatternId;
use crate::store::PatternStore;
use crate::symbol::{Role, Symbol};

/// One position in the alignment grid: row 0 is the New pattern, rows
/// `1..=k` are the Old rows in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub row: u16,
    pub idx: u16,
}

impl Cell {
    pub fn new(row: u16, idx: u16) -> Self {
        Cell { row, idx }
    }
}

/// The compression accounting of one alignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentScore {
    /// Bits of New symbols matched.
    pub b_new: f64,
    /// Bits of the derived code.
    pub b_code: f64,
    /// Compression difference: `b_new - b_code`.
    pub cd: f64,
}

/// The code an alignment derives: unlinked identification and boundary
/// symbols of the Old rows, in column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub symbols: Vec<Symbol>,
}

/// A multiple alignment of one New pattern against Old rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipleAlignment {
    old_rows: Vec<PatternId>,
    columns: Vec<Vec<Cell>>,
}

/// The linear column order of an alignment, including singleton cells.
#[derive(Debug, Clone)]
pub struct Linearization {
    node_cells: Vec<Vec<Cell>>,
    /// Node ids in left-to-right order.
    order: Vec<usize>,
}

impl Linearization {
    /// Nodes in left-to-right order with their cells.
    pub fn ordered_nodes(&self) -> impl Iterator<Item = &[Cell]> {
        self.order.iter().map(|&n| self.node_cells[n].as_slice())
    }
}

/// Everything derived from one alignment in a single pass.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub score: AlignmentScore,
    pub encoding: Encoding,
    /// True when every New symbol is linked.
    pub completed: bool,
    /// Canonical identity: equal exactly for alignments with the same row
    /// multiset and the same links, whatever order rows were added in.
    pub fingerprint: String,
    /// Old-row pattern ids, sorted.
    pub canonical_row_ids: Vec<u32>,
    pub linearization: Linearization,
}

impl MultipleAlignment {
    /// The empty alignment: no rows, no links.
    pub fn empty() -> Self {
        MultipleAlignment { old_rows: Vec::new(), columns: Vec::new() }
    }

    /// Builds an alignment from explicit link pairs, merging transitively
    /// linked cells into columns, and validates it.
    pub fn from_links(
        store: &PatternStore,
        new: &[Symbol],
        old_rows: Vec<PatternId>,
        links: &[(Cell, Cell)],
    ) -> Result<Self> {
        let mut parent: BTreeMap<Cell, Cell> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<Cell, Cell>, c: Cell) -> Cell {
            let p = *parent.entry(c).or_insert(c);
            if p == c {
                c
            } else {
                let root = find(parent, p);
                parent.insert(c, root);
                root
            }
        }
        for &(a, b) in links {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let mut groups: BTreeMap<Cell, Vec<Cell>> = BTreeMap::new();
        let keys: Vec<Cell> = parent.keys().copied().collect();
        for c in keys {
            let root = find(&mut parent, c);
            groups.entry(root).or_default().push(c);
        }
        let columns: Vec<Vec<Cell>> = groups.into_values().collect();
        let ma = MultipleAlignment::from_parts(old_rows, columns);
        ma.analyze(store, new)?;
        Ok(ma)
    }

    pub(crate) fn from_parts(old_rows: Vec<PatternId>, mut columns: Vec<Vec<Cell>>) -> Self {
        for col in &mut columns {
            col.sort();
        }
        columns.sort();
        MultipleAlignment { old_rows, columns }
    }

    pub fn old_rows(&self) -> &[PatternId] {
        &self.old_rows
    }

    pub fn columns(&self) -> &[Vec<Cell>] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.old_rows.len() + 1
    }

    fn row_len(&self, row: u16, store: &PatternStore, new: &[Symbol]) -> usize {
        if row == 0 {
            new.len()
        } else {
            self.old_rows
                .get(row as usize - 1)
                .and_then(|id| store.pattern(*id))
                .map_or(0, |p| p.len())
        }
    }

    /// The symbol at a cell.
    pub fn symbol<'a>(
        &self,
        cell: Cell,
        store: &'a PatternStore,
        new: &'a [Symbol],
    ) -> &'a Symbol {
        if cell.row == 0 {
            &new[cell.idx as usize]
        } else {
            let id = self.old_rows[cell.row as usize - 1];
            &store.pattern(id).expect("row pattern in store").symbols()[cell.idx as usize]
        }
    }

    /// Validation entry point for hand-built alignments.
    pub fn validate(&self, store: &PatternStore, new: &[Symbol]) -> Result<()> {
        self.analyze(store, new).map(|_| ())
    }

    fn check_shape(&self, store: &PatternStore, new: &[Symbol]) -> Result<()> {
        for (r, id) in self.old_rows.iter().enumerate() {
            if store.pattern(*id).is_none() {
                return Err(Error::BadAlignment { reason: format!("row {} not in store", r + 1) });
            }
        }
        let mut seen_cells: BTreeSet<Cell> = BTreeSet::new();
        for col in &self.columns {
            if col.len() < 2 {
                return Err(Error::BadAlignment {
                    reason: "column with fewer than 2 cells".into(),
                });
            }
            let mut rows_in_col = BTreeSet::new();
            for &cell in col {
                if cell.row as usize >= self.row_count() {
                    return Err(Error::BadAlignment {
                        reason: format!("cell row {} out of range", cell.row),
                    });
                }
                if cell.idx as usize >= self.row_len(cell.row, store, new) {
                    return Err(Error::BadAlignment {
                        reason: format!("cell index {} out of range", cell.idx),
                    });
                }
                if !rows_in_col.insert(cell.row) {
                    return Err(Error::BadAlignment {
                        reason: "two cells of one row in a column".into(),
                    });
                }
                if !seen_cells.insert(cell) {
                    return Err(Error::BadAlignment {
                        reason: "cell appears in two columns".into(),
                    });
                }
            }
            let first = self.symbol(col[0], store, new);
            for &cell in &col[1..] {
                if self.symbol(cell, store, new).text() != first.text() {
                    return Err(Error::BadAlignment { reason: "column symbols differ".into() });
                }
            }
        }
        // Every Old row must reach the New row through links.
        let rows = self.row_count();
        let mut adj: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); rows];
        for col in &self.columns {
            for a in col {
                for b in col {
                    if a.row != b.row {
                        adj[a.row as usize].insert(b.row as usize);
                    }
                }
            }
        }
        let mut reached = alloc::vec![false; rows];
        let mut stack = alloc::vec![0usize];
        reached[0] = true;
        while let Some(r) = stack.pop() {
            for &s in &adj[r] {
                if !reached[s] {
                    reached[s] = true;
                    stack.push(s);
                }
            }
        }
        if let Some(r) = reached.iter().position(|ok| !ok) {
            return Err(Error::BadAlignment {
                reason: format!("row {r} not connected to the New row"),
            });
        }
        Ok(())
    }

    /// Orders all cells left to right. Fails when the links imply a cyclic
    /// column order.
    pub fn linearize(&self, store: &PatternStore, new: &[Symbol]) -> Result<Linearization> {
        let rows = self.row_count();
        let row_lens: Vec<usize> =
            (0..rows as u16).map(|r| self.row_len(r, store, new)).collect();

        let mut node_cells: Vec<Vec<Cell>> = self.columns.clone();
        let mut cell_node: Vec<Vec<usize>> =
            row_lens.iter().map(|&len| alloc::vec![usize::MAX; len]).collect();
        for (n, col) in node_cells.iter().enumerate() {
            for &c in col {
                cell_node[c.row as usize][c.idx as usize] = n;
            }
        }
        for (r, len) in row_lens.iter().enumerate() {
            for i in 0..*len {
                if cell_node[r][i] == usize::MAX {
                    cell_node[r][i] = node_cells.len();
                    node_cells.push(alloc::vec![Cell::new(r as u16, i as u16)]);
                }
            }
        }

        let n_nodes = node_cells.len();
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); n_nodes];
        let mut indegree: Vec<usize> = alloc::vec![0; n_nodes];
        for (r, len) in row_lens.iter().enumerate() {
            for i in 1..*len {
                let from = cell_node[r][i - 1];
                let to = cell_node[r][i];
                out[from].push(to);
                indegree[to] += 1;
            }
        }

        // Ready nodes pop smallest first; a node's key is its leftmost cell
        // in (row, index) order, so ties break toward the row listed first.
        let key = |cells: &[Cell]| -> Cell { *cells.iter().min().expect("nonempty node") };
        let mut ready: BTreeSet<(Cell, usize)> = BTreeSet::new();
        for n in 0..n_nodes {
            if indegree[n] == 0 {
                ready.insert((key(&node_cells[n]), n));
            }
        }
        let mut order = Vec::with_capacity(n_nodes);
        while let Some(&(k, n)) = ready.iter().next() {
            ready.remove(&(k, n));
            order.push(n);
            for &to in &out[n] {
                indegree[to] -= 1;
                if indegree[to] == 0 {
                    ready.insert((key(&node_cells[to]), to));
                }
            }
        }
        if order.len() != n_nodes {
            return Err(Error::BadAlignment { reason: "links imply a cyclic column order".into() });
        }
        Ok(Linearization { node_cells, order })
    }

    /// True when every New symbol is linked into a column.
    pub fn is_completed(&self, new: &[Symbol]) -> bool {
        let linked: BTreeSet<u16> = self
            .columns
            .iter()
            .flatten()
            .filter(|c| c.row == 0)
            .map(|c| c.idx)
            .collect();
        linked.len() == new.len()
    }

    /// Full analysis: validation, score, encoding, completion, canonical
    /// fingerprint.
    pub fn analyze(&self, store: &PatternStore, new: &[Symbol]) -> Result<Analysis> {
        self.check_shape(store, new)?;
        let lin = self.linearize(store, new)?;
        let cost = store.cost_model();

        let mut b_new = 0.0;
        for col in &self.columns {
            for cell in col {
                if cell.row == 0 {
                    b_new += cost.symbol_cost(new[cell.idx as usize].text());
                }
            }
        }

        let mut encoding = Vec::new();
        for cells in lin.ordered_nodes() {
            if cells.len() == 1 && cells[0].row != 0 {
                let sym = self.symbol(cells[0], store, new);
                if sym.role() != Role::Content {
                    encoding.push(sym.clone());
                }
            }
        }
        let b_code = cost.sequence_cost(&encoding);

        let (fingerprint, canonical_row_ids) = self.canonical_fingerprint();

        Ok(Analysis {
            score: AlignmentScore { b_new, b_code, cd: b_new - b_code },
            encoding: Encoding { symbols: encoding },
            completed: self.is_completed(new),
            fingerprint,
            canonical_row_ids,
            linearization: lin,
        })
    }

    /// Canonical identity, independent of row insertion order: rows of the
    /// same pattern are interchangeable labels, so the fingerprint is the
    /// smallest rendering over relabelings within same-pattern groups.
    fn canonical_fingerprint(&self) -> (String, Vec<u32>) {
        let mut ids: Vec<u32> = self.old_rows.iter().map(|id| id.0).collect();
        ids.sort_unstable();

        // rank[row] = position among rows sorted by pattern id; rows of one
        // pattern form a group whose internal order is permuted below.
        let mut groups: BTreeMap<u32, Vec<u16>> = BTreeMap::new();
        for (i, id) in self.old_rows.iter().enumerate() {
            groups.entry(id.0).or_default().push((i + 1) as u16);
        }
        let mut base_rank: BTreeMap<u16, usize> = BTreeMap::new();
        let mut next = 1usize;
        let mut perm_groups: Vec<Vec<u16>> = Vec::new();
        for rows in groups.values() {
            for &r in rows {
                base_rank.insert(r, next);
                next += 1;
            }
            if rows.len() > 1 {
                perm_groups.push(rows.clone());
            }
        }

        let render = |rank_of: &BTreeMap<u16, usize>| -> String {
            let mut col_sigs: Vec<Vec<(usize, u16)>> = self
                .columns
                .iter()
                .map(|col| {
                    let mut sig: Vec<(usize, u16)> = col
                        .iter()
                        .map(|c| {
                            let rank = if c.row == 0 { 0 } else { rank_of[&c.row] };
                            (rank, c.idx)
                        })
                        .collect();
                    sig.sort_unstable();
                    sig
                })
                .collect();
            col_sigs.sort_unstable();
            let mut s = String::from("R");
            for id in &ids {
                s.push_str(&format!(" {id}"));
            }
            s.push_str(" C");
            for sig in col_sigs {
                s.push_str(" |");
                for (rank, idx) in sig {
                    s.push_str(&format!(" {rank}:{idx}"));
                }
            }
            s
        };

        if perm_groups.is_empty() {
            return (render(&base_rank), ids);
        }

        // Enumerate relabelings within same-pattern groups, capped; beyond
        // the cap the base labeling stands.
        let mut assignments: Vec<BTreeMap<u16, usize>> = alloc::vec![base_rank.clone()];
        for group in &perm_groups {
            let mut expanded = Vec::new();
            let perms = permutations(group);
            for assign in &assignments {
                for perm in &perms {
                    let mut next_assign = assign.clone();
                    for (slot, &row) in perm.iter().enumerate() {
                        next_assign.insert(row, base_rank[&group[slot]]);
                    }
                    expanded.push(next_assign);
                    if expanded.len() > 24 {
                        return (render(&base_rank), ids);
                    }
                }
            }
            assignments = expanded;
        }
        let best = assignments
            .iter()
            .map(|a| render(a))
            .min()
            .expect("at least one assignment");
        (best, ids)
    }

    /// The content output of an alignment: for every column without a New
    /// cell that holds at least one content symbol, its symbol in order.
    /// This is the decoded remainder when the New pattern is a code.
    pub fn content_projection(&self, store: &PatternStore, new: &[Symbol]) -> Result<Vec<Symbol>> {
        let lin = self.linearize(store, new)?;
        let mut out = Vec::new();
        for cells in lin.ordered_nodes() {
            if cells.iter().any(|c| c.row == 0) {
                continue;
            }
            if cells.iter().any(|&c| self.symbol(c, store, new).role() == Role::Content) {
                out.push(self.symbol(cells[0], store, new).clone());
            }
        }
        Ok(out)
    }

    /// Adds one fresh Old row with links into the existing structure. Each
    /// link ties a cell of the new row to either a lone cell (making a new
    /// column) or an existing column. The result is unvalidated; callers
    /// run [`MultipleAlignment::analyze`].
    pub(crate) fn with_added_row(
        &self,
        pattern: PatternId,
        links: &[(u16, LinkTarget)],
    ) -> MultipleAlignment {
        let q_row = self.row_count() as u16;
        let mut columns = self.columns.clone();
        for &(q_idx, target) in links {
            let q_cell = Cell::new(q_row, q_idx);
            match target {
                LinkTarget::Lone(cell) => columns.push(alloc::vec![cell, q_cell]),
                LinkTarget::Column(ci) => columns[ci].push(q_cell),
            }
        }
        let mut old_rows = self.old_rows.clone();
        old_rows.push(pattern);
        MultipleAlignment::from_parts(old_rows, columns)
    }

    /// Cells not in any column, per row, in row order.
    pub fn unmatched_cells(&self, store: &PatternStore, new: &[Symbol]) -> Vec<Vec<Cell>> {
        let linked: BTreeSet<Cell> = self.columns.iter().flatten().copied().collect();
        (0..self.row_count() as u16)
            .map(|row| {
                (0..self.row_len(row, store, new) as u16)
                    .map(|idx| Cell::new(row, idx))
                    .filter(|c| !linked.contains(c))
                    .collect()
            })
            .collect()
    }
}

fn permutations(items: &[u16]) -> Vec<Vec<u16>> {
    if items.len() <= 1 {
        return alloc::vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest: Vec<u16> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            let mut perm = alloc::vec![first];
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

/// Where a new row's cell may link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum LinkTarget {
    /// An unlinked cell; the link creates a fresh two-cell column.
    Lone(Cell),
    /// An existing column, joined as an extra cell.
    Column(usize),
}

/// Scores an alignment from scratch. See [`MultipleAlignment::analyze`].
pub fn score_alignment(
    ma: &MultipleAlignment,
    store: &PatternStore,
    new: &[Symbol],
) -> Result<AlignmentScore> {
    Ok(ma.analyze(store, new)?.score)
}

/// Derives an alignment's code. See [`MultipleAlignment::analyze`].
pub fn derive_encoding(
    ma: &MultipleAlignment,
    store: &PatternStore,
    new: &[Symbol],
) -> Result<Encoding> {
    Ok(ma.analyze(store, new)?.encoding)
}
