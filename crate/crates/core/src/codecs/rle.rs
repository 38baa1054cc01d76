//! Run-length coding: consecutive copies of a unit collapse to one copy
//! plus a repetition count.
//!
//! Encoding walks left to right. At each position every unit length up to
//! `max_unit_len` is tried, the repeat count of each unit is measured, and
//! the unit with the greatest bit saving wins (ties to the shortest unit,
//! which keeps single-symbol runs canonical). A run costs the unit's bits
//! plus `floor(log2 count) + 1` bits for the count.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::store::CostModel;
use crate::symbol::Symbol;

/// An ordered list of `(unit, count)` runs. Adjacent runs never share a
/// unit, counts are at least 1, and the list is nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLengthStream {
    runs: Vec<(Vec<Symbol>, u32)>,
}

impl RunLengthStream {
    pub fn new(runs: Vec<(Vec<Symbol>, u32)>) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::BadRunStream { reason: "no runs".into() });
        }
        for (i, (unit, count)) in runs.iter().enumerate() {
            if unit.is_empty() {
                return Err(Error::BadRunStream { reason: format!("run {i} has an empty unit") });
            }
            if *count == 0 {
                return Err(Error::BadRunStream { reason: format!("run {i} has count 0") });
            }
        }
        for (i, pair) in runs.windows(2).enumerate() {
            if pair[0].0 == pair[1].0 {
                return Err(Error::BadRunStream {
                    reason: format!("runs {i} and {} share a unit", i + 1),
                });
            }
        }
        Ok(RunLengthStream { runs })
    }

    pub fn runs(&self) -> &[(Vec<Symbol>, u32)] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Bits for the whole run list under `cost`.
    pub fn encoded_bits(&self, cost: &CostModel) -> f64 {
        self.runs
            .iter()
            .map(|(unit, count)| cost.sequence_cost(unit) + count_bits(*count))
            .sum()
    }
}

/// Bits charged for a repetition count: its binary digit count.
pub fn count_bits(count: u32) -> f64 {
    debug_assert!(count >= 1);
    f64::from(32 - count.leading_zeros())
}

/// Greedy run decomposition with unit lengths `1..=max_unit_len`.
pub fn rle_encode(seq: &[Symbol], max_unit_len: usize) -> Result<RunLengthStream> {
    if seq.is_empty() {
        return Err(Error::BadParameter { what: "rle_encode: empty sequence".into() });
    }
    if max_unit_len < 1 {
        return Err(Error::BadParameter { what: "rle_encode: max_unit_len must be >= 1".into() });
    }
    let cost = CostModel::uniform_over(seq.iter().map(|s| s.text().into()));

    let mut runs: Vec<(Vec<Symbol>, u32)> = Vec::new();
    let mut pos = 0usize;
    while pos < seq.len() {
        let remaining = seq.len() - pos;
        let mut best_unit = 1usize;
        let mut best_count = 1u32;
        let mut best_saving = f64::NEG_INFINITY;
        for unit_len in 1..=max_unit_len.min(remaining) {
            let unit = &seq[pos..pos + unit_len];
            let mut count = 1u32;
            while pos + (count as usize + 1) * unit_len <= seq.len()
                && seq[pos + count as usize * unit_len..pos + (count as usize + 1) * unit_len]
                    == *unit
            {
                count += 1;
            }
            let unit_bits = cost.sequence_cost(unit);
            let saving = (f64::from(count) - 1.0) * unit_bits - count_bits(count);
            if saving > best_saving {
                best_saving = saving;
                best_unit = unit_len;
                best_count = count;
            }
        }
        runs.push((seq[pos..pos + best_unit].to_vec(), best_count));
        pos += best_unit * best_count as usize;
    }
    RunLengthStream::new(runs)
}

/// Concatenates each unit `count` times, in order.
pub fn rle_decode(rs: &RunLengthStream) -> Vec<Symbol> {
    let mut out = Vec::new();
    for (unit, count) in &rs.runs {
        for _ in 0..*count {
            out.extend(unit.iter().cloned());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbols;

    #[test]
    fn unary_twelve_ones_single_run() {
        let seq = parse_symbols("1 1 1 1 1 1 1 1 1 1 1 1").unwrap();
        let rs = rle_encode(&seq, 3).unwrap();
        assert_eq!(rs.runs().len(), 1);
        assert_eq!(rs.runs()[0].1, 12);
        assert_eq!(crate::symbol::join_symbols(&rs.runs()[0].0), "1");
        assert_eq!(rle_decode(&rs), seq);
    }

    #[test]
    fn step_signal_three_runs() {
        // 0 x 20, 1 x 5, 0 x 20: the two run boundaries carry the change.
        let mut text = alloc::string::String::new();
        for _ in 0..20 {
            text.push_str("0 ");
        }
        for _ in 0..5 {
            text.push_str("1 ");
        }
        for _ in 0..20 {
            text.push_str("0 ");
        }
        let seq = parse_symbols(text.trim()).unwrap();
        let rs = rle_encode(&seq, 2).unwrap();
        let shape: Vec<(alloc::string::String, u32)> = rs
            .runs()
            .iter()
            .map(|(u, c)| (crate::symbol::join_symbols(u), *c))
            .collect();
        assert_eq!(
            shape,
            alloc::vec![("0".into(), 20), ("1".into(), 5), ("0".into(), 20)]
        );
        assert_eq!(rle_decode(&rs), seq);
    }

    #[test]
    fn two_symbol_unit() {
        let seq = parse_symbols("a b a b a b c").unwrap();
        let rs = rle_encode(&seq, 2).unwrap();
        let shape: Vec<(alloc::string::String, u32)> = rs
            .runs()
            .iter()
            .map(|(u, c)| (crate::symbol::join_symbols(u), *c))
            .collect();
        assert_eq!(shape, alloc::vec![("a b".into(), 3), ("c".into(), 1)]);
        assert_eq!(rle_decode(&rs), seq);
    }

    #[test]
    fn single_symbol_run_of_one() {
        let rs = RunLengthStream::new(alloc::vec![(parse_symbols("x").unwrap(), 1)]).unwrap();
        assert_eq!(rle_decode(&rs), parse_symbols("x").unwrap());
    }

    #[test]
    fn constructor_rejects_bad_streams() {
        assert!(RunLengthStream::new(alloc::vec![]).is_err());
        assert!(RunLengthStream::new(alloc::vec![(parse_symbols("x").unwrap(), 0)]).is_err());
        let mergeable = alloc::vec![
            (parse_symbols("x").unwrap(), 2),
            (parse_symbols("x").unwrap(), 3),
        ];
        assert!(RunLengthStream::new(mergeable).is_err());
    }

    #[test]
    fn outputs_are_never_mergeable() {
        // A few shapes that stress unit-length switching.
        for text in ["a a a b b a a", "a b a b a a b b", "z", "q q q q q q q q"] {
            let seq = parse_symbols(text).unwrap();
            let rs = rle_encode(&seq, 3).unwrap();
            for pair in rs.runs().windows(2) {
                assert_ne!(pair[0].0, pair[1].0, "mergeable adjacent runs for {text}");
            }
            assert_eq!(rle_decode(&rs), seq);
        }
    }

    #[test]
    fn count_bits_binary_digits() {
        assert_eq!(count_bits(1), 1.0);
        assert_eq!(count_bits(2), 2.0);
        assert_eq!(count_bits(3), 2.0);
        assert_eq!(count_bits(12), 4.0);
        assert_eq!(count_bits(20), 5.0);
    }
}
