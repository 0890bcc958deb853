//! Minimal reverse-mode differentiable MLP core and first-order optimizer.
//!
//! Everything is f64 on static shapes: the identifiability experiments are
//! tolerance-sensitive and tiny, so precision beats speed.

mod adam;
mod coupling;
mod mlp;

pub use adam::Adam;
pub use coupling::{CouplingCache, CouplingFlow};
pub use mlp::{Mlp, MlpCache, MlpGradients};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnetError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("non-finite gradient at parameter index {index}")]
    NonFiniteGradient { index: usize },
    #[error("non-finite parameter at index {index} after update")]
    NonFiniteParameter { index: usize },
    #[error("invalid network description: {0}")]
    BadDescription(String),
    #[error("snapshot format error: {0}")]
    Snapshot(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Pointwise activations used by the feature extractors and heads.
///
/// The smooth kind is the default: the identifiability arguments
/// differentiate learned functions twice, so the network should be smooth
/// everywhere. The leaky kind is offered for speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    /// max(x, slope·x), invertible for slope > 0.
    LeakyAffine { slope: f64 },
    /// tanh(x): smooth, bounded, sigmoid-shaped.
    SmoothSigmoid,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::LeakyAffine { slope } => {
                if x >= 0.0 {
                    x
                } else {
                    slope * x
                }
            }
            Activation::SmoothSigmoid => x.tanh(),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::LeakyAffine { slope } => {
                if x >= 0.0 {
                    1.0
                } else {
                    slope
                }
            }
            Activation::SmoothSigmoid => {
                let t = x.tanh();
                1.0 - t * t
            }
        }
    }

    pub fn tag(self) -> String {
        match self {
            Activation::LeakyAffine { slope } => format!("leaky-affine({slope})"),
            Activation::SmoothSigmoid => "smooth-sigmoid".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<Self, NnetError> {
        let s = s.trim();
        if s == "smooth-sigmoid" {
            return Ok(Activation::SmoothSigmoid);
        }
        if let Some(rest) = s.strip_prefix("leaky-affine(") {
            if let Some(inner) = rest.strip_suffix(')') {
                let slope: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| NnetError::BadDescription(format!("bad slope in {s:?}")))?;
                if slope <= 0.0 {
                    return Err(NnetError::BadDescription(
                        "leaky-affine slope must be positive".into(),
                    ));
                }
                return Ok(Activation::LeakyAffine { slope });
            }
        }
        Err(NnetError::BadDescription(format!(
            "unknown activation {s:?}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activation_tags_round_trip() {
        for a in [
            Activation::SmoothSigmoid,
            Activation::LeakyAffine { slope: 0.25 },
        ] {
            assert_eq!(Activation::parse(&a.tag()).unwrap(), a);
        }
        assert!(Activation::parse("leaky-affine(0)").is_err());
        assert!(Activation::parse("relu").is_err());
    }
}
