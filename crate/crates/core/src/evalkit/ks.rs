//! One-sample Kolmogorov–Smirnov test against the uniform distribution.

use super::EvalError;

/// KS statistic and asymptotic p-value for `x` versus U[0, 1].
///
/// Values outside the unit interval are rejected.
pub fn ks_uniformity(x: &[f64]) -> Result<(f64, f64), EvalError> {
    if x.is_empty() {
        return Err(EvalError::TooFewSamples { got: 0, need: 1 });
    }
    for (i, &v) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            return Err(EvalError::OutOfUnitInterval { index: i, value: v });
        }
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &v) in sorted.iter().enumerate() {
        let hi = (i as f64 + 1.0) / n - v;
        let lo = v - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    Ok((d, ks_p_value(d, sorted.len())))
}

// Kolmogorov distribution tail with the Stephens small-sample correction.
fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
