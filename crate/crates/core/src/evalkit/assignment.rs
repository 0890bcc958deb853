//! Exact optimal assignment for small square score matrices.

use ndarray::Array2;

/// Assignment maximizing the total score, O(D³) Hungarian method with
/// potentials. Returns `perm` with `perm[row] = column`.
pub fn max_assignment(score: &Array2<f64>) -> Vec<usize> {
    let n = score.nrows();
    assert_eq!(n, score.ncols(), "assignment needs a square matrix");
    assert!(n > 0);
    // Minimize negated scores.
    let cost = |i: usize, j: usize| -score[[i, j]];

    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched_row = vec![0usize; n + 1]; // by column, 1-indexed; 0 = free
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if matched_row[j] > 0 {
            perm[matched_row[j] - 1] = j - 1;
        }
    }
    perm
}

/// Total score of an assignment.
pub fn assignment_score(score: &Array2<f64>, perm: &[usize]) -> f64 {
    perm.iter()
        .enumerate()
        .map(|(i, &j)| score[[i, j]])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(score: &Array2<f64>) -> f64 {
        fn rec(score: &Array2<f64>, row: usize, used: &mut Vec<bool>) -> f64 {
            let n = score.nrows();
            if row == n {
                return 0.0;
            }
            let mut best = f64::NEG_INFINITY;
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    best = best.max(score[[row, j]] + rec(score, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        rec(score, 0, &mut vec![false; score.ncols()])
    }

    #[test]
    fn picks_the_obvious_diagonal() {
        let score = Array2::from_shape_vec(
            (3, 3),
            vec![0.9, 0.1, 0.0, 0.2, 0.8, 0.1, 0.0, 0.3, 0.7],
        )
        .unwrap();
        assert_eq!(max_assignment(&score), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(values in proptest::collection::vec(-1.0f64..1.0, 36), n in 2usize..=6) {
            let score = Array2::from_shape_vec((n, n), values[..n * n].to_vec()).unwrap();
            let perm = max_assignment(&score);
            let mut seen = vec![false; n];
            for &j in &perm {
                prop_assert!(!seen[j]);
                seen[j] = true;
            }
            let total = assignment_score(&score, &perm);
            let best = brute_force(&score);
            prop_assert!((total - best).abs() < 1e-9, "hungarian {total} vs brute {best}");
        }
    }
}
