//! Laboratory for multi-view nonlinear ICA.
//!
//! The crate generates synthetic multi-view data with ground truth retained,
//! trains constrained contrastive classifiers whose optimal logit is a log
//! density ratio, verifies the view-diversity and corrupter conditions the
//! identifiability results rely on, aggregates many noisy views, and scores
//! source recovery up to the unavoidable component-wise monotone ambiguity.

pub mod aggregate;
pub mod contrastive;
pub mod darmois;
pub mod evalkit;
pub mod expconfig;
pub mod mathx;
pub mod nnet;
pub mod rng;
pub mod sdvcheck;
pub mod synthgen;
pub mod tableio;
