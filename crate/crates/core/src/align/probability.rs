//! Relative probabilities of competing alignments.

use alloc::vec::Vec;

use crate::align::search::BuiltAlignment;

/// `p_i = 2^cd_i / sum_j 2^cd_j`, computed against the maximum for
/// stability. Probabilities sum to 1 and order with the scores.
pub fn probabilities_from_cds(cds: &[f64]) -> Vec<f64> {
    if cds.is_empty() {
        return Vec::new();
    }
    let max = cds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = cds.iter().map(|cd| libm::exp2(cd - max)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Probabilities for a returned alignment set.
pub fn alignment_probabilities(results: &[BuiltAlignment]) -> Vec<f64> {
    let cds: Vec<f64> = results.iter().map(|r| r.score.cd).collect();
    probabilities_from_cds(&cds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_alignment_is_certain() {
        assert_eq!(probabilities_from_cds(&[7.25]), alloc::vec![1.0]);
    }

    #[test]
    fn equal_cds_split_evenly() {
        assert_eq!(probabilities_from_cds(&[2.0, 2.0]), alloc::vec![0.5, 0.5]);
    }

    #[test]
    fn cds_three_and_one() {
        let p = probabilities_from_cds(&[3.0, 1.0]);
        assert_eq!(p, alloc::vec![0.8, 0.2]);
    }

    #[test]
    fn sums_to_one_and_orders_with_cd() {
        let cds = [0.5, -3.25, 4.0, 4.0, -17.5];
        let p = probabilities_from_cds(&cds);
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        for (i, a) in cds.iter().enumerate() {
            for (j, b) in cds.iter().enumerate() {
                if a > b {
                    assert!(p[i] > p[j]);
                }
                if a == b {
                    assert_eq!(p[i], p[j]);
                }
            }
        }
    }

    #[test]
    fn negative_cds_are_fine() {
        let p = probabilities_from_cds(&[-10.0, -12.0]);
        assert_eq!(p, alloc::vec![0.8, 0.2]);
    }
}
