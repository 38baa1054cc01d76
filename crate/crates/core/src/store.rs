//! The pattern store: a set of stored ("Old") patterns with alphabet
//! statistics and the bit-cost model every other module shares.
//!
//! Roles are derived when a store is built, by the class-marker convention:
//! in a pattern `<Class> <Discriminator> <contents...> #<Class>` the first
//! two symbols identify the pattern and the final `#`-symbol closes it.
//! Within any pattern's contents, a symbol whose text is a known class name
//! identifies a constituent rather than carrying substance, so it is a
//! service symbol too. Patterns that do not follow the convention use their
//! leading symbol as the identifier and everything after it as contents.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pattern::{Pattern, PatternId};
use crate::symbol::{Role, Symbol};

/// How per-symbol bit costs are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    /// Every symbol costs `log2(max(2, |alphabet|))` bits.
    Uniform,
    /// A symbol costs `-log2(f(s)/F)` bits, with `f` frequency-weighted
    /// occurrence counts and `F` their sum.
    Frequency,
}

impl CostMode {
    pub fn name(self) -> &'static str {
        match self {
            CostMode::Uniform => "uniform",
            CostMode::Frequency => "frequency",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform" => Some(CostMode::Uniform),
            "frequency" => Some(CostMode::Frequency),
            _ => None,
        }
    }
}

/// Per-symbol bit costs over a fixed alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    mode: CostMode,
    costs: BTreeMap<String, f64>,
    /// Cost assigned to symbols outside the table (fresh codec codes).
    fresh_cost: f64,
}

impl CostModel {
    /// Derives a cost model from `(symbol text, weighted count)` statistics.
    pub fn from_counts(mode: CostMode, counts: &BTreeMap<String, u64>) -> Self {
        let alphabet_size = counts.len();
        let uniform = libm::log2(2.0_f64.max(alphabet_size as f64));
        let mut costs = BTreeMap::new();
        match mode {
            CostMode::Uniform => {
                for text in counts.keys() {
                    costs.insert(text.clone(), uniform);
                }
            }
            CostMode::Frequency => {
                let total: u64 = counts.values().sum();
                for (text, &f) in counts {
                    let mut c = -libm::log2(f as f64 / total as f64);
                    // A one-symbol alphabet would cost 0 bits; keep costs positive.
                    if c <= 0.0 {
                        c = 1.0;
                    }
                    costs.insert(text.clone(), c);
                }
            }
        }
        CostModel { mode, costs, fresh_cost: uniform }
    }

    /// A uniform model over an explicit alphabet.
    pub fn uniform_over<I: IntoIterator<Item = String>>(alphabet: I) -> Self {
        let counts: BTreeMap<String, u64> = alphabet.into_iter().map(|t| (t, 1)).collect();
        CostModel::from_counts(CostMode::Uniform, &counts)
    }

    /// A model with caller-fixed per-symbol costs (used by scale tests).
    pub fn from_table(mode: CostMode, costs: BTreeMap<String, f64>, fresh_cost: f64) -> Self {
        CostModel { mode, costs, fresh_cost }
    }

    pub fn mode(&self) -> CostMode {
        self.mode
    }

    pub fn alphabet_size(&self) -> usize {
        self.costs.len()
    }

    pub fn contains(&self, text: &str) -> bool {
        self.costs.contains_key(text)
    }

    /// Cost of one symbol. Unknown symbols get the fresh-symbol cost, which
    /// is how codec code symbols extend the model.
    pub fn symbol_cost(&self, text: &str) -> f64 {
        self.costs.get(text).copied().unwrap_or(self.fresh_cost)
    }

    /// Cost of one symbol, erring on symbols outside the alphabet.
    pub fn known_symbol_cost(&self, text: &str) -> Result<f64> {
        self.costs
            .get(text)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol { text: text.to_string() })
    }

    /// Cost charged for a fresh symbol outside the alphabet.
    pub fn fresh_cost(&self) -> f64 {
        self.fresh_cost
    }

    /// Sum of the symbols' costs, extending the alphabet over fresh symbols.
    pub fn sequence_cost(&self, seq: &[Symbol]) -> f64 {
        seq.iter().map(|s| self.symbol_cost(s.text())).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.costs.iter().map(|(t, &c)| (t.as_str(), c))
    }
}

/// The set of stored patterns, their alphabet, and the cost model.
#[derive(Debug, Clone)]
pub struct PatternStore {
    patterns: Vec<Pattern>,
    alphabet: BTreeSet<String>,
    cost_model: CostModel,
    class_names: BTreeSet<String>,
}

impl PatternStore {
    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn pattern(&self, id: PatternId) -> Option<&Pattern> {
        self.patterns.get(id.0 as usize)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost_model
    }

    pub fn class_names(&self) -> &BTreeSet<String> {
        &self.class_names
    }

    /// Sum of per-symbol costs; errs on symbols outside the alphabet,
    /// naming the first offender. The empty sequence costs 0 bits.
    pub fn sequence_cost(&self, seq: &[Symbol]) -> Result<f64> {
        let mut total = 0.0;
        for s in seq {
            total += self.cost_model.known_symbol_cost(s.text())?;
        }
        Ok(total)
    }
}

/// Builds a store from `(symbols, frequency)` rows, deriving the alphabet,
/// the cost table, and every symbol role.
pub fn build_store(rows: Vec<(Vec<Symbol>, u32)>, mode: CostMode) -> Result<PatternStore> {
    for (i, (syms, freq)) in rows.iter().enumerate() {
        if syms.is_empty() {
            return Err(Error::EmptyPattern { index: i });
        }
        if *freq == 0 {
            return Err(Error::ZeroFrequency { index: i });
        }
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (i, (syms, _)) in rows.iter().enumerate() {
        let key = crate::symbol::join_symbols(syms);
        if !seen.insert(key) {
            return Err(Error::DuplicatePattern { index: i });
        }
    }

    let mut patterns: Vec<Pattern> = rows
        .into_iter()
        .enumerate()
        .map(|(i, (syms, freq))| Pattern::new(PatternId(i as u32), syms, freq))
        .collect();

    let class_names: BTreeSet<String> = patterns
        .iter()
        .filter_map(|p| p.class_name().map(String::from))
        .collect();

    for p in &mut patterns {
        assign_roles(p, &class_names);
    }

    let mut alphabet = BTreeSet::new();
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for p in &patterns {
        for s in p.symbols() {
            alphabet.insert(s.text().to_string());
            *counts.entry(s.text().to_string()).or_insert(0) += u64::from(p.frequency());
        }
    }
    let cost_model = CostModel::from_counts(mode, &counts);

    Ok(PatternStore { patterns, alphabet, cost_model, class_names })
}

fn assign_roles(pattern: &mut Pattern, class_names: &BTreeSet<String>) {
    let is_class = pattern.class_name().is_some();
    let len = pattern.len();
    for (i, sym) in pattern.symbols_mut().iter_mut().enumerate() {
        if sym.role() == Role::Boundary {
            continue;
        }
        let id = if is_class {
            i == 0 || i == 1 || class_names.contains(sym.text())
        } else {
            // Leading-identifier convention for chunk patterns: the first
            // symbol names the rest.
            (i == 0 && len > 1) || class_names.contains(sym.text())
        };
        if id {
            sym.set_role(Role::Id);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbols;
    use alloc::vec;

    fn rows(specs: &[(&str, u32)]) -> Vec<(Vec<Symbol>, u32)> {
        specs
            .iter()
            .map(|(s, f)| (parse_symbols(s).unwrap(), *f))
            .collect()
    }

    #[test]
    fn uniform_two_symbol_store() {
        let store = build_store(rows(&[("a b", 1)]), CostMode::Uniform).unwrap();
        assert_eq!(store.alphabet().len(), 2);
        assert_eq!(store.cost_model().symbol_cost("a"), 1.0);
        assert_eq!(store.cost_model().symbol_cost("b"), 1.0);
    }

    #[test]
    fn frequency_costs() {
        let store = build_store(rows(&[("a a a b", 1)]), CostMode::Frequency).unwrap();
        let ca = store.cost_model().symbol_cost("a");
        let cb = store.cost_model().symbol_cost("b");
        assert!((ca - 0.4150374992788438).abs() < 1e-12);
        assert!((cb - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_pattern_with_index() {
        let err = build_store(vec![(parse_symbols("a").unwrap(), 1), (Vec::new(), 1)], CostMode::Uniform)
            .unwrap_err();
        assert_eq!(err, Error::EmptyPattern { index: 1 });
    }

    #[test]
    fn rejects_duplicate_pattern() {
        let err = build_store(rows(&[("a b", 1), ("a b", 2)]), CostMode::Uniform).unwrap_err();
        assert_eq!(err, Error::DuplicatePattern { index: 1 });
    }

    #[test]
    fn rejects_zero_frequency() {
        let err = build_store(rows(&[("a b", 0)]), CostMode::Uniform).unwrap_err();
        assert_eq!(err, Error::ZeroFrequency { index: 0 });
    }

    #[test]
    fn grammar_roles_follow_class_markers() {
        let store = build_store(
            rows(&[("NP 2 A #A N #N #NP", 1), ("A 12 fruit #A", 1), ("N 7 flies #N", 1)]),
            CostMode::Uniform,
        )
        .unwrap();
        let np = store.pattern(PatternId(0)).unwrap();
        let roles: Vec<Role> = np.symbols().iter().map(|s| s.role()).collect();
        assert_eq!(
            roles,
            vec![
                Role::Id,       // NP
                Role::Id,       // 2
                Role::Id,       // A (class reference)
                Role::Boundary, // #A
                Role::Id,       // N (class reference)
                Role::Boundary, // #N
                Role::Boundary, // #NP
            ]
        );
        let a = store.pattern(PatternId(1)).unwrap();
        assert_eq!(a.symbols()[2].role(), Role::Content); // fruit
    }

    #[test]
    fn chunk_pattern_leading_identifier() {
        let store =
            build_store(rows(&[("TFEU Treaty on the Functioning", 1)]), CostMode::Uniform).unwrap();
        let p = store.pattern(PatternId(0)).unwrap();
        assert_eq!(p.symbols()[0].role(), Role::Id);
        assert!(p.symbols()[1..].iter().all(|s| s.role() == Role::Content));
    }

    #[test]
    fn unknown_symbol_error_names_symbol() {
        let store = build_store(rows(&[("a b", 1)]), CostMode::Uniform).unwrap();
        let err = store.sequence_cost(&parse_symbols("a z").unwrap()).unwrap_err();
        assert_eq!(err, Error::UnknownSymbol { text: "z".into() });
    }

    #[test]
    fn empty_sequence_costs_zero() {
        let store = build_store(rows(&[("a b", 1)]), CostMode::Uniform).unwrap();
        assert_eq!(store.sequence_cost(&[]).unwrap(), 0.0);
    }

    #[test]
    fn fig_grammar_store_alphabet() {
        let store = build_store(
            rows(&[
                ("A 12 fruit #A", 1),
                ("NP 2 A #A N #N #NP", 1),
                ("N 7 flies #N", 1),
                ("N 5 banana #N", 1),
                ("NP 3 D #D N #N #NP", 1),
                ("V 9 like #V", 1),
                ("S 1 NP #NP V #V NP #NP #S", 1),
                ("D 11 a #D", 1),
            ]),
            CostMode::Uniform,
        )
        .unwrap();
        assert_eq!(store.len(), 8);
        for t in ["fruit", "flies", "like", "a", "banana", "NP", "#NP", "S", "#S"] {
            assert!(store.alphabet().contains(t), "missing {t}");
        }
    }
}
