//! Regression for compositional data through the additive log-ratio (ALR)
//! transform.
//!
//! The pipeline closes raw part amounts onto the simplex, maps them to
//! log-ratios against the last part, fits an independent Gaussian linear
//! model per log-ratio by maximum likelihood, and maps fitted predictors
//! back to proportions with delta-method or bootstrap intervals.
//!
//! - [`composition`] - simplex types, closure, ALR and its inverse
//! - [`regress`] - ML fit, Wald intervals, log-likelihood, significance
//! - [`backmap`] - proportions at a covariate value, with intervals
//! - [`simulate`] - seeded Monte Carlo studies of the estimator
//! - [`ingest`] - match-table CSV parsing and the bundled dataset
//! - [`reproduce`] - comparison against published tables
//!
//! ```
//! use alrfit_core::{ingest, regress, backmap};
//!
//! let data = ingest::to_regression_dataset(&ingest::bundled())?;
//! let fit = regress::fit(&data)?;
//! let at_zero = backmap::estimate_proportions(&fit, &[0.0])?;
//! assert_eq!(at_zero.len(), 4);
//! # Ok::<(), alrfit_core::Error>(())
//! ```

pub mod backmap;
pub mod composition;
pub mod error;
pub mod ingest;
pub mod published;
pub mod regress;
pub mod reproduce;
pub mod rng;
pub mod simulate;
pub mod stats;

pub use backmap::{CiMethod, ProportionEstimate};
pub use composition::{alr, alr_inverse, closure, Composition, LogRatioVector};
pub use error::{Error, Result};
pub use ingest::{MatchRecord, MatchTable};
pub use regress::{ComponentFit, ModelFit, Parameter, RegressionDataset, WaldInterval};
pub use simulate::{SimConfig, SimReport};
