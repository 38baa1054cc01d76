//! Staged beam search over multiple alignments.
//!
//! Stage 0 seeds one candidate per Old pattern from its best pairwise
//! alignment against the New pattern. Every later stage takes the `beam`
//! best candidates by compression difference and extends each with one
//! further Old row: the new row is pairwise-aligned against the unmatched
//! cells of each existing row in turn, and its remaining symbols then
//! absorb any other unmatched cells they can reach without breaking the
//! column order. The search stops when a stage adds no alignment it has
//! not seen before, or after `max_stages` stages (which also bounds the
//! rows of any result).
//!
//! On small problems (at most 6 patterns of at most 6 symbols, New at most
//! 6) extension additionally branches over single-link anchors and over
//! every absorption combination, which makes the search exhaustive at toy
//! scale; large problems use the greedy variant only.
//!
//! Returned are the `nbest` *completed* alignments — those accounting for
//! every New symbol — ranked by descending compression difference, ties
//! broken by smaller code, fewer rows, then the canonical row-id list.
//! Candidates are deduplicated by row-set-and-links identity throughout,
//! so results do not depend on the order extensions are evaluated in, nor
//! on the executor that runs them.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::align::multi::{
    Analysis, Cell, Encoding, LinkTarget, MultipleAlignment, AlignmentScore,
};
use crate::align::pairwise::align_pairwise;
use crate::error::{Error, Result};
use crate::pattern::PatternId;
use crate::store::PatternStore;
use crate::symbol::Symbol;

/// Knobs of the staged beam search.
#[derive(Debug, Clone, Copy)]
pub struct SearchParams {
    /// Candidates kept per stage.
    pub beam: usize,
    /// Completed alignments returned.
    pub nbest: usize,
    /// Stage limit; also the maximum Old rows per alignment.
    pub max_stages: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { beam: 200, nbest: 4, max_stages: 16 }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.beam < 1 || self.nbest < 1 || self.max_stages < 1 {
            return Err(Error::BadParameter {
                what: "beam, nbest, and max_stages must all be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Runs independent extension tasks of one stage. The stage barrier sorts
/// and deduplicates afterwards, so any executor yields identical results.
pub trait StageExecutor: Sync {
    fn run_indexed<T: Send>(&self, tasks: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T>;
}

/// Runs tasks in order on the calling thread.
pub struct SerialExecutor;

impl StageExecutor for SerialExecutor {
    fn run_indexed<T: Send>(&self, tasks: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        (0..tasks).map(f).collect()
    }
}

/// A completed alignment with its derived quantities.
#[derive(Debug, Clone)]
pub struct BuiltAlignment {
    pub alignment: MultipleAlignment,
    pub score: AlignmentScore,
    pub encoding: Encoding,
    /// Old-row pattern ids in canonical left-to-right order.
    pub row_ids: Vec<u32>,
}

#[derive(Debug, Clone)]
struct Candidate {
    ma: MultipleAlignment,
    score: AlignmentScore,
    encoding: Encoding,
    completed: bool,
    fingerprint: String,
    row_ids: Vec<u32>,
}

impl Candidate {
    fn from_analysis(ma: MultipleAlignment, analysis: Analysis) -> Self {
        Candidate {
            ma,
            score: analysis.score,
            encoding: analysis.encoding,
            completed: analysis.completed,
            fingerprint: analysis.fingerprint,
            row_ids: analysis.canonical_row_ids,
        }
    }
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.score
        .cd
        .total_cmp(&a.score.cd)
        .then_with(|| a.score.b_code.total_cmp(&b.score.b_code))
        .then_with(|| a.ma.old_rows().len().cmp(&b.ma.old_rows().len()))
        .then_with(|| a.row_ids.cmp(&b.row_ids))
        .then_with(|| a.fingerprint.cmp(&b.fingerprint))
}

/// Builds alignments with the serial executor. See the module docs.
pub fn build_alignments(
    new: &[Symbol],
    store: &PatternStore,
    params: &SearchParams,
) -> Result<Vec<BuiltAlignment>> {
    build_alignments_with(new, store, params, &SerialExecutor)
}

/// Builds alignments, running each stage's extensions on `exec`.
pub fn build_alignments_with(
    new: &[Symbol],
    store: &PatternStore,
    params: &SearchParams,
    exec: &impl StageExecutor,
) -> Result<Vec<BuiltAlignment>> {
    params.validate()?;
    if new.is_empty() {
        return Err(Error::BadParameter { what: "empty New pattern".into() });
    }
    if store.is_empty() {
        return Err(Error::BadParameter { what: "empty pattern store".into() });
    }
    let rich = store.len() <= 6
        && new.len() <= 6
        && store.patterns().iter().all(|p| p.len() <= 6);

    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut completed_pool: Vec<Candidate> = Vec::new();

    // Stage 0: pairwise seeds.
    let mut seeds: Vec<Candidate> = Vec::new();
    for p in store.patterns() {
        let mut link_sets: Vec<Vec<(Cell, Cell)>> = Vec::new();
        let pw = align_pairwise(new, p.symbols(), store.cost_model());
        if !pw.links.is_empty() {
            link_sets.push(
                pw.links
                    .iter()
                    .map(|&(i, j)| (Cell::new(0, i as u16), Cell::new(1, j as u16)))
                    .collect(),
            );
        }
        if rich {
            for (i, ns) in new.iter().enumerate() {
                for (j, ps) in p.symbols().iter().enumerate() {
                    if ns.text() == ps.text() {
                        link_sets
                            .push(alloc::vec![(Cell::new(0, i as u16), Cell::new(1, j as u16))]);
                    }
                }
            }
        }
        for links in link_sets {
            let Ok(ma) =
                MultipleAlignment::from_links(store, new, alloc::vec![p.id()], &links)
            else {
                continue;
            };
            let Ok(analysis) = ma.analyze(store, new) else { continue };
            let cand = Candidate::from_analysis(ma, analysis);
            if seen.insert(cand.fingerprint.clone()) {
                seeds.push(cand);
            }
        }
    }
    seeds.sort_by(rank);
    completed_pool.extend(seeds.iter().filter(|c| c.completed).cloned());
    seeds.truncate(params.beam);
    let mut agenda = seeds;

    for _stage in 1..params.max_stages {
        if agenda.is_empty() {
            break;
        }
        let patterns: Vec<PatternId> = store.patterns().iter().map(|p| p.id()).collect();
        let tasks = agenda.len() * patterns.len();
        let agenda_ref = &agenda;
        let patterns_ref = &patterns;
        let results: Vec<Vec<Candidate>> = exec.run_indexed(tasks, &move |t| {
            let cand = &agenda_ref[t / patterns_ref.len()];
            let q = patterns_ref[t % patterns_ref.len()];
            extend_candidate(cand, q, store, new, rich)
        });

        let mut fresh: Vec<Candidate> = Vec::new();
        for cand in results.into_iter().flatten() {
            if seen.insert(cand.fingerprint.clone()) {
                fresh.push(cand);
            }
        }
        if fresh.is_empty() {
            break;
        }
        fresh.sort_by(rank);
        completed_pool.extend(fresh.iter().filter(|c| c.completed).cloned());
        fresh.truncate(params.beam);
        agenda = fresh;
    }

    completed_pool.sort_by(rank);
    completed_pool.truncate(params.nbest);
    Ok(completed_pool
        .into_iter()
        .map(|c| BuiltAlignment {
            alignment: c.ma,
            score: c.score,
            encoding: c.encoding,
            row_ids: c.row_ids,
        })
        .collect())
}

/// Caps the link-set variants tried per (candidate, pattern) extension.
const EXTENSION_VARIANT_CAP: usize = 64;

fn extend_candidate(
    cand: &Candidate,
    q_id: PatternId,
    store: &PatternStore,
    new: &[Symbol],
    rich: bool,
) -> Vec<Candidate> {
    let q = store.pattern(q_id).expect("pattern id from this store");
    let unmatched = cand.ma.unmatched_cells(store, new);

    // Cheap reject: the new row must share a symbol with something
    // unmatched, or join an existing column.
    let q_texts: BTreeSet<&str> = q.symbols().iter().map(Symbol::text).collect();
    let mut reachable = unmatched
        .iter()
        .flatten()
        .any(|&c| q_texts.contains(cand.ma.symbol(c, store, new).text()));
    if rich && !reachable {
        reachable = cand
            .ma
            .columns()
            .iter()
            .any(|col| q_texts.contains(cand.ma.symbol(col[0], store, new).text()));
    }
    if !reachable {
        return Vec::new();
    }

    // Base link sets: the heaviest pairwise alignment of the new row
    // against each existing row's unmatched cells.
    let mut bases: Vec<Vec<(u16, LinkTarget)>> = Vec::new();
    for cells in &unmatched {
        if cells.is_empty() {
            continue;
        }
        let target: Vec<Symbol> =
            cells.iter().map(|&c| cand.ma.symbol(c, store, new).clone()).collect();
        let pw = align_pairwise(q.symbols(), &target, store.cost_model());
        if pw.links.is_empty() {
            continue;
        }
        bases.push(
            pw.links
                .iter()
                .map(|&(qi, tj)| (qi as u16, LinkTarget::Lone(cells[tj])))
                .collect(),
        );
    }
    if rich {
        // Single-link anchors: every equal-text pairing, including joins
        // into existing columns.
        for (qi, qs) in q.symbols().iter().enumerate() {
            for &cell in unmatched.iter().flatten() {
                if cand.ma.symbol(cell, store, new).text() == qs.text() {
                    bases.push(alloc::vec![(qi as u16, LinkTarget::Lone(cell))]);
                }
            }
            for (ci, col) in cand.ma.columns().iter().enumerate() {
                if cand.ma.symbol(col[0], store, new).text() == qs.text() {
                    bases.push(alloc::vec![(qi as u16, LinkTarget::Column(ci))]);
                }
            }
        }
    }

    // Absorption options per q index, in deterministic target order.
    let absorb_options = |qi: usize| -> Vec<LinkTarget> {
        let text = q.symbols()[qi].text();
        let mut opts: Vec<LinkTarget> = unmatched
            .iter()
            .flatten()
            .filter(|&&c| cand.ma.symbol(c, store, new).text() == text)
            .map(|&c| LinkTarget::Lone(c))
            .collect();
        for (ci, col) in cand.ma.columns().iter().enumerate() {
            if cand.ma.symbol(col[0], store, new).text() == text {
                opts.push(LinkTarget::Column(ci));
            }
        }
        opts
    };

    // Base link sets can coincide (a single-link anchor may equal a DP
    // result); variants are deduplicated before the expensive analysis.
    bases.sort();
    bases.dedup();

    let mut variants: Vec<Vec<(u16, LinkTarget)>> = Vec::new();
    for base in bases {
        if rich {
            rich_absorb(cand, q_id, store, new, &base, &absorb_options, &mut variants);
        } else {
            greedy_absorb(cand, q_id, store, new, &base, &absorb_options, &mut variants);
        }
        if variants.len() >= EXTENSION_VARIANT_CAP {
            break;
        }
    }
    variants.sort();
    variants.dedup();
    variants.truncate(EXTENSION_VARIANT_CAP);

    let mut out = Vec::new();
    for links in variants {
        let ma = cand.ma.with_added_row(q_id, &links);
        let Ok(analysis) = ma.analyze(store, new) else { continue };
        out.push(Candidate::from_analysis(ma, analysis));
    }
    out
}

fn links_valid(
    base_ma: &MultipleAlignment,
    q_id: PatternId,
    links: &[(u16, LinkTarget)],
    store: &PatternStore,
    new: &[Symbol],
) -> bool {
    base_ma.with_added_row(q_id, links).linearize(store, new).is_ok()
}

/// Extends `base` by absorbing, left to right, every further cell of the
/// new row that fits some unmatched cell or column; first valid target
/// wins. Emits the absorbed variant and, when different, the bare base.
fn greedy_absorb(
    cand: &Candidate,
    q_id: PatternId,
    store: &PatternStore,
    new: &[Symbol],
    base: &[(u16, LinkTarget)],
    absorb_options: &dyn Fn(usize) -> Vec<LinkTarget>,
    variants: &mut Vec<Vec<(u16, LinkTarget)>>,
) {
    let q_len = store.pattern(q_id).expect("pattern").len();
    let used_q: BTreeSet<u16> = base.iter().map(|&(qi, _)| qi).collect();
    let mut used_targets: BTreeSet<TargetKey> =
        base.iter().map(|&(_, t)| target_key(t)).collect();
    let mut links: Vec<(u16, LinkTarget)> = base.to_vec();
    for qi in 0..q_len as u16 {
        if used_q.contains(&qi) {
            continue;
        }
        for target in absorb_options(qi as usize) {
            if used_targets.contains(&target_key(target)) {
                continue;
            }
            links.push((qi, target));
            if links_valid(&cand.ma, q_id, &links, store, new) {
                used_targets.insert(target_key(target));
                break;
            }
            links.pop();
        }
    }
    if links.len() != base.len() {
        variants.push(links);
    }
    variants.push(base.to_vec());
}

/// Branches over every absorption combination (capped), most links first.
fn rich_absorb(
    cand: &Candidate,
    q_id: PatternId,
    store: &PatternStore,
    new: &[Symbol],
    base: &[(u16, LinkTarget)],
    absorb_options: &dyn Fn(usize) -> Vec<LinkTarget>,
    variants: &mut Vec<Vec<(u16, LinkTarget)>>,
) {
    let q_len = store.pattern(q_id).expect("pattern").len();
    let used_q: BTreeSet<u16> = base.iter().map(|&(qi, _)| qi).collect();
    let free: Vec<u16> = (0..q_len as u16).filter(|qi| !used_q.contains(qi)).collect();
    let mut used_targets: BTreeSet<TargetKey> =
        base.iter().map(|&(_, t)| target_key(t)).collect();
    let mut links: Vec<(u16, LinkTarget)> = base.to_vec();
    dfs_absorb(
        cand,
        q_id,
        store,
        new,
        &free,
        0,
        absorb_options,
        &mut used_targets,
        &mut links,
        variants,
    );
}

#[allow(clippy::too_many_arguments)]
fn dfs_absorb(
    cand: &Candidate,
    q_id: PatternId,
    store: &PatternStore,
    new: &[Symbol],
    free: &[u16],
    pos: usize,
    absorb_options: &dyn Fn(usize) -> Vec<LinkTarget>,
    used_targets: &mut BTreeSet<TargetKey>,
    links: &mut Vec<(u16, LinkTarget)>,
    variants: &mut Vec<Vec<(u16, LinkTarget)>>,
) {
    if variants.len() >= EXTENSION_VARIANT_CAP {
        return;
    }
    let Some(&qi) = free.get(pos) else {
        variants.push(links.clone());
        return;
    };
    for target in absorb_options(qi as usize) {
        if used_targets.contains(&target_key(target)) {
            continue;
        }
        links.push((qi, target));
        if links_valid(&cand.ma, q_id, links, store, new) {
            used_targets.insert(target_key(target));
            dfs_absorb(
                cand, q_id, store, new, free, pos + 1, absorb_options, used_targets, links,
                variants,
            );
            used_targets.remove(&target_key(target));
        }
        links.pop();
    }
    dfs_absorb(
        cand, q_id, store, new, free, pos + 1, absorb_options, used_targets, links, variants,
    );
}

type TargetKey = (u8, u16, u16);

fn target_key(t: LinkTarget) -> TargetKey {
    match t {
        LinkTarget::Lone(c) => (0, c.row, c.idx),
        LinkTarget::Column(ci) => (1, ci as u16, 0),
    }
}

/// The decoded remainder of aligning a code against the store.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    pub symbols: Vec<Symbol>,
    /// True when the code matched a pattern with no contents to emit.
    pub degenerate: bool,
}

/// Decompression by compression: aligns `code` as the New pattern and reads
/// off the content symbols of the best alignment. Errs when no completed
/// alignment exists.
pub fn decode_encoding(
    code: &[Symbol],
    store: &PatternStore,
    params: &SearchParams,
) -> Result<DecodeOutput> {
    decode_encoding_with(code, store, params, &SerialExecutor)
}

/// [`decode_encoding`] on an explicit executor.
pub fn decode_encoding_with(
    code: &[Symbol],
    store: &PatternStore,
    params: &SearchParams,
    exec: &impl StageExecutor,
) -> Result<DecodeOutput> {
    if code.is_empty() {
        return Err(Error::BadParameter { what: "empty code".into() });
    }
    let results = build_alignments_with(code, store, params, exec)?;
    let top = results.first().ok_or(Error::NoDecode)?;
    let symbols = top.alignment.content_projection(store, code)?;
    let degenerate = symbols.is_empty();
    Ok(DecodeOutput { symbols, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{build_store, CostMode};
    use crate::symbol::{join_symbols, parse_symbols};
    use alloc::vec;

    fn store_of(lines: &[&str]) -> PatternStore {
        build_store(
            lines.iter().map(|l| (parse_symbols(l).unwrap(), 1)).collect(),
            CostMode::Uniform,
        )
        .unwrap()
    }

    fn small() -> SearchParams {
        SearchParams { beam: 50, nbest: 4, max_stages: 5 }
    }

    #[test]
    fn single_candidate_store() {
        let store = store_of(&["D 11 a #D"]);
        let new = parse_symbols("a").unwrap();
        let out = build_alignments(&new, &store, &small()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].row_ids, vec![0]);
        assert_eq!(join_symbols(&out[0].encoding.symbols), "D 11 #D");
    }

    #[test]
    fn no_shared_symbols_returns_empty() {
        let store = store_of(&["x y z"]);
        let new = parse_symbols("p q").unwrap();
        let out = build_alignments(&new, &store, &small()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn tfeu_decode() {
        let store = store_of(&["TFEU Treaty on the Functioning of the European Union"]);
        let code = parse_symbols("TFEU").unwrap();
        let out = decode_encoding(&code, &store, &small()).unwrap();
        assert_eq!(
            join_symbols(&out.symbols),
            "Treaty on the Functioning of the European Union"
        );
        assert!(!out.degenerate);
    }

    #[test]
    fn degenerate_decode_flagged() {
        let store = store_of(&["X", "Y other things"]);
        let code = parse_symbols("X").unwrap();
        let out = decode_encoding(&code, &store, &small()).unwrap();
        assert!(out.degenerate);
        assert!(out.symbols.is_empty());
    }

    #[test]
    fn no_decode_error() {
        let store = store_of(&["X a b"]);
        let code = parse_symbols("Z").unwrap();
        assert_eq!(
            decode_encoding(&code, &store, &small()).unwrap_err(),
            Error::NoDecode
        );
    }

    #[test]
    fn two_word_parse_assembles_tree() {
        let store = store_of(&["NP 2 A #A N #N #NP", "A 12 fruit #A", "N 7 flies #N"]);
        let new = parse_symbols("fruit flies").unwrap();
        let out = build_alignments(&new, &store, &small()).unwrap();
        assert!(!out.is_empty());
        let mut rows = out[0].row_ids.clone();
        rows.sort();
        assert_eq!(rows, vec![0, 1, 2]);
        assert_eq!(join_symbols(&out[0].encoding.symbols), "NP 2 12 7 #NP");
    }

    #[test]
    fn repeated_pattern_used_twice() {
        let store = store_of(&["D 1 the #D"]);
        let new = parse_symbols("the the").unwrap();
        let out = build_alignments(&new, &store, &small()).unwrap();
        assert!(!out.is_empty());
        assert_eq!(out[0].row_ids, vec![0, 0]);
    }

    #[test]
    fn executor_does_not_change_results() {
        struct ReverseChunks;
        impl StageExecutor for ReverseChunks {
            fn run_indexed<T: Send>(
                &self,
                tasks: usize,
                f: &(dyn Fn(usize) -> T + Sync),
            ) -> Vec<T> {
                // Evaluate in reverse, return in order.
                let mut out: Vec<Option<T>> = (0..tasks).map(|_| None).collect();
                for t in (0..tasks).rev() {
                    out[t] = Some(f(t));
                }
                out.into_iter().map(|x| x.expect("filled")).collect()
            }
        }
        let store = store_of(&["NP 2 A #A N #N #NP", "A 12 fruit #A", "N 7 flies #N"]);
        let new = parse_symbols("fruit flies").unwrap();
        let params = small();
        let a = build_alignments_with(&new, &store, &params, &SerialExecutor).unwrap();
        let b = build_alignments_with(&new, &store, &params, &ReverseChunks).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.alignment, y.alignment);
            assert_eq!(x.score.cd, y.score.cd);
        }
    }
}
