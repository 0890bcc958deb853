//! Synthetic generative models with ground truth retained for evaluation.
//!
//! Observations are built as `x_i = f_i(g_i(s, n_i))`: independent sources
//! `s`, a component-wise corrupter `g_i` per view and a smooth invertible
//! mixing `f_i` per view, with an explicitly computable mixing inverse kept
//! around as a test oracle.

mod corrupter;
mod dataset;
mod dist;
mod mixing;

pub use corrupter::{
    check_corrupter_conditions, CorrupterConditionReport, CorrupterKind, CorrupterSpec,
    DEFAULT_FD_STEP,
};
pub use dataset::{
    export_dataset, load_matrix_csv, sample_dataset, GenerativeSpec, PairedDataset, SourceSpec,
    ViewSpec,
};
pub use dist::ComponentDist;
pub use mixing::{MixingSpec, Nonlinearity, EPS_DET};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("degenerate mixing: |det| <= {eps} after {attempts} attempts")]
    DegenerateMixing { eps: f64, attempts: usize },
    #[error("singular weight matrix in mixing layer {layer}")]
    SingularLayer { layer: usize },
    #[error("non-finite derivative estimate at grid point {point} component {component}")]
    NonFiniteDerivative { point: usize, component: usize },
    #[error("corrupter condition grid is empty")]
    EmptyGrid,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error(transparent)]
    Table(#[from] crate::tableio::TableError),
}
