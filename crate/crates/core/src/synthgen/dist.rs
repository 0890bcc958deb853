//! Per-component scalar distributions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::SynthError;

/// Distribution of one source or noise component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComponentDist {
    Uniform { a: f64, b: f64 },
    Laplace { mu: f64, b: f64 },
    Gaussian { mu: f64, sigma: f64 },
}

impl ComponentDist {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ComponentDist::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            ComponentDist::Laplace { mu, b } => {
                // inverse transform on u ∈ (-1/2, 1/2)
                let u = rng.random::<f64>() - 0.5;
                mu - b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            ComponentDist::Gaussian { mu, sigma } => {
                Normal::new(mu, sigma).unwrap().sample(rng)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ComponentDist::Uniform { a, b } => 0.5 * (a + b),
            ComponentDist::Laplace { mu, .. } => mu,
            ComponentDist::Gaussian { mu, .. } => mu,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            ComponentDist::Uniform { a, b } => (b - a) * (b - a) / 12.0,
            ComponentDist::Laplace { b, .. } => 2.0 * b * b,
            ComponentDist::Gaussian { sigma, .. } => sigma * sigma,
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            ComponentDist::Uniform { a, b } => format!("uniform({a},{b})"),
            ComponentDist::Laplace { mu, b } => format!("laplace({mu},{b})"),
            ComponentDist::Gaussian { mu, sigma } => format!("gaussian({mu},{sigma})"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, SynthError> {
        let s = s.trim();
        let (name, args) = s
            .split_once('(')
            .ok_or_else(|| SynthError::InvalidSpec(format!("bad distribution {s:?}")))?;
        let args = args
            .strip_suffix(')')
            .ok_or_else(|| SynthError::InvalidSpec(format!("bad distribution {s:?}")))?;
        let parts: Vec<f64> = args
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| SynthError::InvalidSpec(format!("bad distribution parameters {s:?}")))?;
        if parts.len() != 2 {
            return Err(SynthError::InvalidSpec(format!(
                "distribution {s:?} needs exactly two parameters"
            )));
        }
        match name.trim() {
            "uniform" => {
                if parts[0] >= parts[1] {
                    return Err(SynthError::InvalidSpec("uniform needs a < b".into()));
                }
                Ok(ComponentDist::Uniform {
                    a: parts[0],
                    b: parts[1],
                })
            }
            "laplace" => {
                if parts[1] <= 0.0 {
                    return Err(SynthError::InvalidSpec("laplace needs b > 0".into()));
                }
                Ok(ComponentDist::Laplace {
                    mu: parts[0],
                    b: parts[1],
                })
            }
            "gaussian" => {
                if parts[1] <= 0.0 {
                    return Err(SynthError::InvalidSpec("gaussian needs sigma > 0".into()));
                }
                Ok(ComponentDist::Gaussian {
                    mu: parts[0],
                    sigma: parts[1],
                })
            }
            other => Err(SynthError::InvalidSpec(format!(
                "unknown distribution {other:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::indexed_rng;

    #[test]
    fn tags_round_trip() {
        for d in [
            ComponentDist::Uniform { a: -1.0, b: 1.0 },
            ComponentDist::Laplace { mu: 0.5, b: 2.0 },
            ComponentDist::Gaussian { mu: 0.0, sigma: 0.3 },
        ] {
            assert_eq!(ComponentDist::parse(&d.tag()).unwrap(), d);
        }
        assert!(ComponentDist::parse("uniform(1,0)").is_err());
        assert!(ComponentDist::parse("cauchy(0,1)").is_err());
    }

    #[test]
    fn sample_moments_match() {
        for d in [
            ComponentDist::Uniform { a: -2.0, b: 1.0 },
            ComponentDist::Laplace { mu: 1.0, b: 0.7 },
            ComponentDist::Gaussian { mu: -0.5, sigma: 1.5 },
        ] {
            let mut rng = indexed_rng(3, 0);
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
            let m = crate::mathx::mean(&xs);
            let v = crate::mathx::variance(&xs);
            assert!((m - d.mean()).abs() < 0.02, "{d:?} mean {m}");
            assert!((v - d.variance()).abs() / d.variance() < 0.05, "{d:?} var {v}");
        }
    }
}
