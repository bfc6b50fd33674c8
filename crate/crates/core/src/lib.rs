//! Structure-preserving minority oversampling for high-dimensional,
//! imbalanced time-series classification.
//!
//! The oversampler works in three stages:
//!
//! 1. [`drsnn`] partitions the minority class into modes with a
//!    density-ratio based shared-nearest-neighbor clustering.
//! 2. [`shrinkage`] estimates a well-conditioned covariance matrix for every
//!    mode by shrinking the sample covariance toward its diagonal.
//! 3. [`synthesis`] draws synthetic minority samples from the resulting
//!    multivariate Gaussians, allocating samples proportionally to mode size.
//!
//! [`pipeline`] wires the stages together (with ablation modes),
//! [`baselines`] provides random oversampling and SMOTE, and [`evaluation`]
//! holds the k-NN classifier, metrics, Wilcoxon tests and the benchmark
//! harness.
//!
//! Data-parallel loops run on rayon when the `parallel` feature (on by
//! default) is enabled and fall back to plain iterators otherwise. Results
//! never depend on the execution order.

pub mod baselines;
pub mod datasets;
pub mod drsnn;
pub mod error;
pub mod evaluation;
pub mod generate;
pub mod linalg;
pub mod pipeline;
pub mod shrinkage;
pub mod synthesis;

mod par;

pub use error::{OhitError, Result};
