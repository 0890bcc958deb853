//! Distance correlation with permutation p-values.
//!
//! The statistic is the bias-corrected (U-centered) squared distance
//! correlation; it detects nonlinear dependence that Pearson and Spearman
//! miss, equals 1 when the two blocks are identical and fluctuates around 0
//! under independence. Permutations reuse the centered distance matrices, so
//! each permutation costs O(n²).

use ndarray::Array2;
use rayon::prelude::*;

use super::EvalError;
use crate::evalkit::rank::spearman;
use crate::rng::indexed_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndStatistic {
    DCor,
    Spearman,
}

#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub statistic: IndStatistic,
    pub value: f64,
    pub p_value: f64,
    pub n_permutations: usize,
}

struct CenteredDistances {
    n: usize,
    m: Vec<f64>, // n×n, U-centered, zero diagonal
    dvar: f64,
}

fn pairwise_distances(x: &Array2<f64>) -> Vec<f64> {
    let n = x.nrows();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s = 0.0;
            for c in 0..x.ncols() {
                let diff = x[[i, c]] - x[[j, c]];
                s += diff * diff;
            }
            let dist = s.sqrt();
            d[i * n + j] = dist;
            d[j * n + i] = dist;
        }
    }
    d
}

fn u_center(x: &Array2<f64>) -> CenteredDistances {
    let n = x.nrows();
    let mut d = pairwise_distances(x);
    let nf = n as f64;
    let mut row_sums = vec![0.0; n];
    let mut total = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += d[i * n + j];
        }
        row_sums[i] = s;
        total += s;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                d[i * n + j] = 0.0;
            } else {
                d[i * n + j] -= row_sums[i] / (nf - 2.0) + row_sums[j] / (nf - 2.0)
                    - total / ((nf - 1.0) * (nf - 2.0));
            }
        }
    }
    let dvar = inner(&d, &d, n);
    CenteredDistances { n, m: d, dvar }
}

fn inner(a: &[f64], b: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[i * n + j] * b[i * n + j];
        }
    }
    s / (n as f64 * (n as f64 - 3.0))
}

fn inner_permuted(a: &[f64], b: &[f64], perm: &[usize], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        let pi = perm[i] * n;
        let ai = i * n;
        for j in 0..n {
            s += a[ai + j] * b[pi + perm[j]];
        }
    }
    s / (n as f64 * (n as f64 - 3.0))
}

fn corr_from(cov: f64, dvar_a: f64, dvar_b: f64) -> f64 {
    let denom = dvar_a * dvar_b;
    if denom <= 0.0 {
        0.0
    } else {
        cov / denom.sqrt()
    }
}

/// Bias-corrected squared distance correlation of two sample blocks.
pub fn dcor(u: &Array2<f64>, v: &Array2<f64>) -> Result<f64, EvalError> {
    if u.nrows() != v.nrows() {
        return Err(EvalError::ShapeMismatch(format!(
            "{} vs {} rows",
            u.nrows(),
            v.nrows()
        )));
    }
    if u.nrows() < 20 {
        return Err(EvalError::TooFewSamples {
            got: u.nrows(),
            need: 20,
        });
    }
    let a = u_center(u);
    let b = u_center(v);
    Ok(corr_from(inner(&a.m, &b.m, a.n), a.dvar, b.dvar))
}

/// Permutation test of independence between the rows of `u` and `v`.
///
/// The label permutation is applied to `v`'s rows; the p-value is
/// `(1 + #{perm ≥ observed}) / (n_perm + 1)`.
pub fn dcor_test(
    u: &Array2<f64>,
    v: &Array2<f64>,
    n_perm: usize,
    seed: u64,
) -> Result<IndependenceReport, EvalError> {
    if n_perm < 20 {
        return Err(EvalError::TooFewPermutations {
            got: n_perm,
            need: 20,
        });
    }
    if u.nrows() != v.nrows() {
        return Err(EvalError::ShapeMismatch(format!(
            "{} vs {} rows",
            u.nrows(),
            v.nrows()
        )));
    }
    if u.nrows() < 20 {
        return Err(EvalError::TooFewSamples {
            got: u.nrows(),
            need: 20,
        });
    }
    let a = u_center(u);
    let b = u_center(v);
    let n = a.n;
    let observed = corr_from(inner(&a.m, &b.m, n), a.dvar, b.dvar);

    let exceed: usize = (0..n_perm)
        .into_par_iter()
        .map(|p| {
            let mut rng = indexed_rng(seed, p as u64);
            let mut perm: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            let stat = corr_from(inner_permuted(&a.m, &b.m, &perm, n), a.dvar, b.dvar);
            usize::from(stat >= observed)
        })
        .sum();
    Ok(IndependenceReport {
        statistic: IndStatistic::DCor,
        value: observed,
        p_value: (1 + exceed) as f64 / (n_perm + 1) as f64,
        n_permutations: n_perm,
    })
}

/// Permutation test on |Spearman| for scalar samples.
pub fn spearman_test(
    u: &[f64],
    v: &[f64],
    n_perm: usize,
    seed: u64,
) -> Result<IndependenceReport, EvalError> {
    if n_perm < 20 {
        return Err(EvalError::TooFewPermutations {
            got: n_perm,
            need: 20,
        });
    }
    let observed = spearman(u, v)?.abs();
    let exceed: usize = (0..n_perm)
        .into_par_iter()
        .map(|p| {
            let mut rng = indexed_rng(seed, p as u64);
            let mut shuffled = v.to_vec();
            use rand::seq::SliceRandom;
            shuffled.shuffle(&mut rng);
            let stat = spearman(u, &shuffled).map(f64::abs).unwrap_or(0.0);
            usize::from(stat >= observed)
        })
        .sum();
    Ok(IndependenceReport {
        statistic: IndStatistic::Spearman,
        value: observed,
        p_value: (1 + exceed) as f64 / (n_perm + 1) as f64,
        n_permutations: n_perm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalkit::ks_uniformity;
    use crate::rng::indexed_rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_matrix(n: usize, d: usize, seed: u64) -> Array2<f64> {
        let mut rng = indexed_rng(seed, 0);
        Array2::from_shape_fn((n, d), |_| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn identical_blocks_give_statistic_one_and_minimal_p() {
        let u = gaussian_matrix(60, 2, 1);
        let rep = dcor_test(&u, &u, 99, 7).unwrap();
        assert!((rep.value - 1.0).abs() < 1e-10, "value = {}", rep.value);
        assert!((rep.p_value - 1.0 / 100.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_and_invariant_under_scaling_and_rotation() {
        let u = gaussian_matrix(80, 2, 2);
        let v = gaussian_matrix(80, 2, 3);
        let duv = dcor(&u, &v).unwrap();
        let dvu = dcor(&v, &u).unwrap();
        assert!((duv - dvu).abs() < 1e-12);

        let scaled = u.mapv(|x| 3.5 * x);
        assert!((dcor(&scaled, &v).unwrap() - duv).abs() < 1e-10);

        // rotation of the u block
        let c = 0.6f64.cos();
        let s = 0.6f64.sin();
        let mut rot = Array2::zeros(u.dim());
        for r in 0..u.nrows() {
            rot[[r, 0]] = c * u[[r, 0]] - s * u[[r, 1]];
            rot[[r, 1]] = s * u[[r, 0]] + c * u[[r, 1]];
        }
        assert!((dcor(&rot, &v).unwrap() - duv).abs() < 1e-10);
    }

    #[test]
    fn detects_pearson_blind_dependence() {
        let u = gaussian_matrix(500, 1, 4);
        let v = u.mapv(|x| x * x);
        let rep = dcor_test(&u, &v, 199, 11).unwrap();
        assert!(rep.p_value < 0.01, "p = {}", rep.p_value);
    }

    #[test]
    fn p_values_are_calibrated_under_the_null() {
        // 200 independent draws at n = 500; the permutation p-value should be
        // uniform on [0, 1].
        let ps: Vec<f64> = (0..200)
            .map(|s| {
                let u = gaussian_matrix(500, 1, 100 + s);
                let v = gaussian_matrix(500, 1, 10_000 + s);
                dcor_test(&u, &v, 99, 555 + s).unwrap().p_value
            })
            .collect();
        let (_, p) = ks_uniformity(&ps).unwrap();
        assert!(p > 0.01, "calibration KS p = {p}");
    }

    #[test]
    fn too_few_permutations_is_an_error() {
        let u = gaussian_matrix(30, 1, 5);
        assert!(matches!(
            dcor_test(&u, &u, 5, 1),
            Err(EvalError::TooFewPermutations { .. })
        ));
    }
}
