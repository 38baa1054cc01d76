//! Pairwise alignment: the heaviest order-preserving one-to-one matching
//! between two symbol sequences, where a matched pair must have equal text
//! and weighs its symbol's bits.

use alloc::vec::Vec;

use crate::store::CostModel;
use crate::symbol::Symbol;

/// An order-preserving one-to-one matching between two sequences. Links are
/// `(left index, right index)` pairs, strictly increasing in both
/// coordinates, each joining equal symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseAlignment {
    pub links: Vec<(usize, usize)>,
    /// Total bits of the matched symbols.
    pub matched_bits: f64,
}

/// Dynamic program over the index grid, maximising matched-symbol bits.
///
/// The traceback is deterministic: walking back from the end, a match is
/// taken whenever it attains the optimum, otherwise the left sequence
/// advances before the right one.
pub fn align_pairwise(a: &[Symbol], b: &[Symbol], cost: &CostModel) -> PairwiseAlignment {
    let n = a.len();
    let m = b.len();
    let mut dp = alloc::vec![0.0f64; (n + 1) * (m + 1)];
    let at = |i: usize, j: usize| i * (m + 1) + j;
    for i in 1..=n {
        for j in 1..=m {
            let mut best = dp[at(i - 1, j)].max(dp[at(i, j - 1)]);
            if a[i - 1].text() == b[j - 1].text() {
                let w = cost.symbol_cost(a[i - 1].text());
                best = best.max(dp[at(i - 1, j - 1)] + w);
            }
            dp[at(i, j)] = best;
        }
    }

    let mut links = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        let here = dp[at(i, j)];
        if a[i - 1].text() == b[j - 1].text() {
            let w = cost.symbol_cost(a[i - 1].text());
            if here == dp[at(i - 1, j - 1)] + w {
                links.push((i - 1, j - 1));
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if here == dp[at(i - 1, j)] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    links.reverse();
    PairwiseAlignment { links, matched_bits: dp[at(n, m)] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::CostModel;
    use crate::symbol::parse_symbols;

    fn uniform(texts: &[&str]) -> CostModel {
        CostModel::uniform_over(texts.iter().map(|t| (*t).into()))
    }

    #[test]
    fn identical_sequences_link_everything() {
        let a = parse_symbols("x y z").unwrap();
        let cost = uniform(&["x", "y", "z"]);
        let al = align_pairwise(&a, &a, &cost);
        assert_eq!(al.links, alloc::vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(al.matched_bits, cost.sequence_cost(&a));
    }

    #[test]
    fn disjoint_alphabets_link_nothing() {
        let a = parse_symbols("a b").unwrap();
        let b = parse_symbols("c d").unwrap();
        let cost = uniform(&["a", "b", "c", "d"]);
        let al = align_pairwise(&a, &b, &cost);
        assert!(al.links.is_empty());
        assert_eq!(al.matched_bits, 0.0);
    }

    #[test]
    fn links_are_strictly_increasing_and_equal_text() {
        let a = parse_symbols("a b a c a").unwrap();
        let b = parse_symbols("b a a a c").unwrap();
        let cost = uniform(&["a", "b", "c"]);
        let al = align_pairwise(&a, &b, &cost);
        for w in al.links.windows(2) {
            assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1);
        }
        for (i, j) in &al.links {
            assert_eq!(a[*i].text(), b[*j].text());
        }
    }

    #[test]
    fn weights_can_prefer_fewer_heavier_links() {
        // "q" is worth 4 bits, the rest 1: matching q alone beats two lights.
        let mut costs = alloc::collections::BTreeMap::new();
        for t in ["a", "b", "q"] {
            costs.insert(alloc::string::String::from(t), 1.0);
        }
        costs.insert("q".into(), 4.0);
        let cost = CostModel::from_table(crate::store::CostMode::Uniform, costs, 1.0);
        let a = parse_symbols("a b q").unwrap();
        let b = parse_symbols("q a b").unwrap();
        let al = align_pairwise(&a, &b, &cost);
        assert_eq!(al.links, alloc::vec![(2, 0)]);
        assert_eq!(al.matched_bits, 4.0);
    }
}
