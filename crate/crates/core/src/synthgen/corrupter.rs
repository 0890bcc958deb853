//! Component-wise corrupters and the low-noise regularity conditions.

use rand_chacha::ChaCha8Rng;

use super::dist::ComponentDist;
use super::SynthError;

/// Relative central-difference step for the condition checks; balances
/// truncation against roundoff at f64 scale.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrupterKind {
    /// g(s, n) = s; the noise stream is ignored entirely.
    Identity,
    /// g(s, n) = s + scale·n.
    Additive,
    /// g(s, n) = s·(1 + scale·n); multiplicative-style corruption.
    ScaledAdditive,
}

impl CorrupterKind {
    pub fn tag(self) -> &'static str {
        match self {
            CorrupterKind::Identity => "identity",
            CorrupterKind::Additive => "additive",
            CorrupterKind::ScaledAdditive => "scaled-additive",
        }
    }

    pub fn parse(s: &str) -> Result<Self, SynthError> {
        match s.trim() {
            "identity" => Ok(CorrupterKind::Identity),
            "additive" => Ok(CorrupterKind::Additive),
            "scaled-additive" => Ok(CorrupterKind::ScaledAdditive),
            other => Err(SynthError::InvalidSpec(format!(
                "unknown corrupter kind {other:?}"
            ))),
        }
    }
}

/// Component-wise corrupter: output component i depends only on (s_i, n_i).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrupterSpec {
    pub kind: CorrupterKind,
    /// Raw per-component noise distribution.
    pub noise: ComponentDist,
    /// Re-center sampled noise so its mean is exactly zero.
    pub zero_mean: bool,
    /// Non-negative overall noise scale; applied inside g.
    pub scale: f64,
}

impl CorrupterSpec {
    pub fn identity() -> CorrupterSpec {
        CorrupterSpec {
            kind: CorrupterKind::Identity,
            noise: ComponentDist::Gaussian { mu: 0.0, sigma: 1.0 },
            zero_mean: true,
            scale: 0.0,
        }
    }

    pub fn additive_gaussian(scale: f64) -> CorrupterSpec {
        CorrupterSpec {
            kind: CorrupterKind::Additive,
            noise: ComponentDist::Gaussian { mu: 0.0, sigma: 1.0 },
            zero_mean: true,
            scale,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.scale < 0.0 {
            return Err(SynthError::InvalidSpec("noise scale must be >= 0".into()));
        }
        Ok(())
    }

    /// Scalar corruption map g(s, n).
    pub fn apply_scalar(&self, s: f64, n: f64) -> f64 {
        match self.kind {
            CorrupterKind::Identity => s,
            CorrupterKind::Additive => s + self.scale * n,
            CorrupterKind::ScaledAdditive => s * (1.0 + self.scale * n),
        }
    }

    /// Draws one raw noise value (before the scale, which lives inside g).
    pub fn sample_noise(&self, rng: &mut ChaCha8Rng) -> f64 {
        let raw = self.noise.sample(rng);
        if self.zero_mean {
            raw - self.noise.mean()
        } else {
            raw
        }
    }

    /// Variance of the corruption around s for the additive kind.
    pub fn additive_noise_variance(&self) -> f64 {
        self.scale * self.scale * self.noise.variance()
    }

    /// Consumes noise draws even when the kind ignores them?
    /// No: identity consumes nothing by construction.
    pub fn consumes_noise(&self) -> bool {
        self.kind != CorrupterKind::Identity
    }
}

/// Outcome of the low-noise corrupter conditions evaluated on a source grid.
#[derive(Debug, Clone)]
pub struct CorrupterConditionReport {
    /// max over the grid of |∂g/∂n| at n = 0, per component.
    pub bound_a: Vec<f64>,
    /// max over the grid of ∂g/∂s at n = 0, per component.
    pub bound_b: Vec<f64>,
    /// min over the grid of ∂g/∂s at n = 0, per component.
    pub min_signal_derivative: Vec<f64>,
    pub passes: bool,
}

/// Checks the two corrupter criteria for low-noise source recovery: the
/// noise influence |∂g/∂n| at n = 0 must be bounded, and the signal
/// derivative ∂g/∂s at n = 0 must be strictly positive everywhere on the
/// grid. Derivatives are central differences with relative step `h_fd`.
pub fn check_corrupter_conditions(
    spec: &CorrupterSpec,
    s_grid: &[Vec<f64>],
    h_fd: f64,
) -> Result<CorrupterConditionReport, SynthError> {
    if s_grid.is_empty() {
        return Err(SynthError::EmptyGrid);
    }
    spec.validate()?;
    let dim = s_grid[0].len();
    let mut bound_a = vec![0.0f64; dim];
    let mut bound_b = vec![f64::NEG_INFINITY; dim];
    let mut min_b = vec![f64::INFINITY; dim];
    const STRICT_POS: f64 = 1e-10;

    for (pi, point) in s_grid.iter().enumerate() {
        if point.len() != dim {
            return Err(SynthError::DimMismatch(format!(
                "grid point {pi} has dimension {} (expected {dim})",
                point.len()
            )));
        }
        for (ci, &s) in point.iter().enumerate() {
            let hn = h_fd; // noise derivative evaluated at n = 0
            let da = (spec.apply_scalar(s, hn) - spec.apply_scalar(s, -hn)) / (2.0 * hn);
            let hs = h_fd * s.abs().max(1.0);
            let db = (spec.apply_scalar(s + hs, 0.0) - spec.apply_scalar(s - hs, 0.0)) / (2.0 * hs);
            if !da.is_finite() || !db.is_finite() {
                return Err(SynthError::NonFiniteDerivative {
                    point: pi,
                    component: ci,
                });
            }
            bound_a[ci] = bound_a[ci].max(da.abs());
            bound_b[ci] = bound_b[ci].max(db);
            min_b[ci] = min_b[ci].min(db);
        }
    }
    let passes = bound_a.iter().all(|v| v.is_finite())
        && min_b.iter().all(|&v| v > STRICT_POS);
    Ok(CorrupterConditionReport {
        bound_a,
        bound_b,
        min_signal_derivative: min_b,
        passes,
    })
}
