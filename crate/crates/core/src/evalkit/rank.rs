//! Rank transforms and Spearman correlation.

use ndarray::Array2;

use super::EvalError;
use crate::mathx::pearson;

/// Ranks in 1..=n with ties broken by the average-rank convention.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        // average of ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

/// Spearman rank correlation of two equally long samples.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::ShapeMismatch(format!(
            "spearman inputs of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    if is_constant(x) {
        return Err(EvalError::ConstantColumn {
            matrix: "first",
            column: 0,
        });
    }
    if is_constant(y) {
        return Err(EvalError::ConstantColumn {
            matrix: "second",
            column: 0,
        });
    }
    Ok(pearson(&average_ranks(x), &average_ranks(y)))
}

/// Signed Spearman correlations between all column pairs of `a` (rows of the
/// result) and `b` (columns of the result).
pub fn spearman_matrix(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>, EvalError> {
    if a.nrows() != b.nrows() {
        return Err(EvalError::ShapeMismatch(format!(
            "{} vs {} rows",
            a.nrows(),
            b.nrows()
        )));
    }
    let ra = rank_columns(a, "estimates")?;
    let rb = rank_columns(b, "truth")?;
    let mut m = Array2::zeros((a.ncols(), b.ncols()));
    for i in 0..a.ncols() {
        for j in 0..b.ncols() {
            m[[i, j]] = pearson(&ra[i], &rb[j]);
        }
    }
    Ok(m)
}

/// Absolute Spearman dependence matrix.
pub fn abs_spearman_matrix(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>, EvalError> {
    Ok(spearman_matrix(a, b)?.mapv(f64::abs))
}

fn rank_columns(m: &Array2<f64>, name: &'static str) -> Result<Vec<Vec<f64>>, EvalError> {
    let mut out = Vec::with_capacity(m.ncols());
    for c in 0..m.ncols() {
        let col: Vec<f64> = m.column(c).to_vec();
        if is_constant(&col) {
            return Err(EvalError::ConstantColumn { matrix: name, column: c });
        }
        out.push(average_ranks(&col));
    }
    Ok(out)
}
