//! Prediction-interval regression toolkit.
//!
//! Trains small fully-connected networks to output per-example prediction
//! intervals under a family of interval losses (relaxed quantile regression
//! and its width/orthogonality-regularized variants, classic pinball pairs,
//! simultaneous quantile regression, direct interval regression), evaluates
//! them with the standard coverage/width/independence metrics, and ships a
//! set of brute-force and closed-form oracles that check the coverage
//! guarantees of those losses numerically, independent of any trained model.
//!
//! The numeric kernels (losses, metrics, interval canonicalization) are
//! generic over the scalar type via [`Scalar`]; everything stateful
//! (datasets, networks, oracles, the benchmark harness) runs on [`Real`].
//!
//! Modules:
//! - [`rng`]: deterministic seeded randomness, the only entropy source.
//! - [`interval`]: canonicalized interval batches and coverage targets.
//! - [`losses`]: interval losses and their analytic gradients.
//! - [`net`]: two-layer MLP with manual backprop and Adam.
//! - [`data`]: synthetic generators, CSV ingestion, preprocessing/splits.
//! - [`metrics`]: PICP, MPIW, width-coverage correlation, HSIC.
//! - [`oracle`]: brute-force / quadrature verification of the loss theory.
//! - [`bench`]: training loop, grid search, protocols, report emission.

pub mod bench;
pub mod data;
pub mod dataset;
pub mod error;
pub mod interval;
pub mod losses;
pub mod matrix;
pub mod metrics;
pub mod net;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete scalar used by all stateful machinery. The theorem oracles need
/// tolerances down to 1e-10, which rules out f32 there.
pub type Real = f64;

/// Interval batch over the default scalar.
pub type Intervals = interval::IntervalBatch<Real>;
