//! Scoring and statistical testing: recovery-up-to-gauge metrics, optimal
//! assignment matching, independence and uniformity tests.

mod assignment;
mod dcor;
mod ks;
mod mcc;
mod rank;

pub use assignment::max_assignment;
pub use dcor::{dcor, dcor_test, spearman_test, IndStatistic, IndependenceReport};
pub use ks::ks_uniformity;
pub use mcc::{mcc, MccReport};
pub use rank::{abs_spearman_matrix, average_ranks, spearman, spearman_matrix};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("column {column} of {matrix} is constant; rank correlation undefined")]
    ConstantColumn {
        matrix: &'static str,
        column: usize,
    },
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("need at least {need} permutations, got {got}")]
    TooFewPermutations { got: usize, need: usize },
    #[error("value {value} at index {index} outside [0, 1]")]
    OutOfUnitInterval { index: usize, value: f64 },
}
