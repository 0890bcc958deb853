//! Mean correlation coefficient: per-component |Spearman| after optimal
//! assignment. Rank correlation makes the score invariant under the
//! component-wise strictly monotone gauge that nonlinear ICA cannot resolve.

use ndarray::Array2;

use super::assignment::max_assignment;
use super::rank::abs_spearman_matrix;
use super::EvalError;
use crate::tableio::Table;

#[derive(Debug, Clone)]
pub struct MccReport {
    /// `permutation[i]` = truth component matched to estimate component `i`.
    pub permutation: Vec<usize>,
    /// |Spearman| of each matched pair, indexed by estimate component.
    pub per_component: Vec<f64>,
    /// Mean of the matched scores.
    pub mean: f64,
    /// Full |Spearman| dependence matrix (estimates × truth).
    pub dependence: Array2<f64>,
}

impl MccReport {
    pub fn summary_line(&self) -> String {
        format!("mean_mcc={}", crate::tableio::fmt_f64(self.mean))
    }

    pub fn to_table(&self, seed: u64) -> Table {
        let mut t = Table::with_seed(&["component", "matched_to", "score"], seed);
        t.comment("mean_mcc", crate::tableio::fmt_f64(self.mean));
        for (i, (&j, &s)) in self.permutation.iter().zip(&self.per_component).enumerate() {
            t.push(vec![i as f64, j as f64, s]);
        }
        t
    }
}

/// Scores `estimates` against `truth`, matching components by exact optimal
/// assignment over the |Spearman| matrix.
pub fn mcc(estimates: &Array2<f64>, truth: &Array2<f64>) -> Result<MccReport, EvalError> {
    if estimates.dim() != truth.dim() {
        return Err(EvalError::ShapeMismatch(format!(
            "estimates {:?} vs truth {:?}",
            estimates.dim(),
            truth.dim()
        )));
    }
    if estimates.nrows() < 10 {
        return Err(EvalError::TooFewSamples {
            got: estimates.nrows(),
            need: 10,
        });
    }
    let dependence = abs_spearman_matrix(estimates, truth)?;
    let permutation = max_assignment(&dependence);
    let per_component: Vec<f64> = permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| dependence[[i, j]])
        .collect();
    let mean = per_component.iter().sum::<f64>() / per_component.len() as f64;
    Ok(MccReport {
        permutation,
        per_component,
        mean,
        dependence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::indexed_rng;
    use rand::Rng;

    fn random_matrix(n: usize, d: usize, seed: u64) -> Array2<f64> {
        let mut rng = indexed_rng(seed, 0);
        Array2::from_shape_fn((n, d), |_| rng.random::<f64>() - 0.5)
    }

    #[test]
    fn identical_matrices_score_one_with_identity_matching() {
        let x = random_matrix(200, 3, 1);
        let r = mcc(&x, &x).unwrap();
        assert_eq!(r.permutation, vec![0, 1, 2]);
        assert!((r.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_maps_and_column_swaps_are_invisible() {
        let x = random_matrix(300, 2, 2);
        // estimates = exp(truth) with columns swapped
        let mut e = Array2::zeros((300, 2));
        for r in 0..300 {
            e[[r, 0]] = x[[r, 1]].exp();
            e[[r, 1]] = x[[r, 0]].exp();
        }
        let rep = mcc(&e, &x).unwrap();
        assert_eq!(rep.permutation, vec![1, 0]);
        assert!((rep.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_estimates_score_near_zero() {
        let x = random_matrix(2000, 3, 3);
        let y = random_matrix(2000, 3, 4);
        let rep = mcc(&y, &x).unwrap();
        assert!(rep.mean < 0.1, "null mcc = {}", rep.mean);
    }

    #[test]
    fn constant_column_errors_with_column_name() {
        let mut x = random_matrix(50, 2, 5);
        let y = x.clone();
        x.column_mut(1).fill(7.0);
        match mcc(&x, &y) {
            Err(EvalError::ConstantColumn { matrix, column }) => {
                assert_eq!(matrix, "estimates");
                assert_eq!(column, 1);
            }
            other => panic!("expected constant-column error, got {other:?}"),
        }
    }

    #[test]
    fn gauge_invariance_is_exact() {
        let x = random_matrix(150, 3, 6);
        let base = mcc(&x, &x).unwrap();
        let mut warped = x.clone();
        for r in 0..warped.nrows() {
            warped[[r, 0]] = warped[[r, 0]].powi(3);
            warped[[r, 1]] = warped[[r, 1]] + warped[[r, 1]].tanh();
            warped[[r, 2]] = -(-warped[[r, 2]]).exp(); // increasing
        }
        let w = mcc(&warped, &x).unwrap();
        assert_eq!(base.mean.to_bits(), w.mean.to_bits());
    }

    #[test]
    fn column_permutation_changes_matching_not_score() {
        let x = random_matrix(120, 3, 7);
        let y = random_matrix(120, 3, 8);
        let base = mcc(&y, &x).unwrap();
        let mut swapped = Array2::zeros(y.dim());
        let perm = [2usize, 0, 1];
        for (to, &from) in perm.iter().enumerate() {
            swapped.column_mut(to).assign(&y.column(from));
        }
        let s = mcc(&swapped, &x).unwrap();
        assert!((base.mean - s.mean).abs() < 1e-12);
    }
}
