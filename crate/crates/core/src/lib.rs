//! Semi-mechanistic epidemic models for estimating the effectiveness of
//! nonpharmaceutical interventions, with gradient-based Bayesian inference
//! and the experiment machinery (holdouts, cross-validation, sensitivity
//! grids) used to stress those estimates.
//!
//! Modules, roughly bottom-up:
//!
//! * [`epi`] — delay distributions, generation interval, R-to-growth.
//! * [`data`] — NPI activation panels and observed count series.
//! * [`transmission`] — `R` grids under each effect form, transmission noise.
//! * [`infection`] — infection propagation and the observation model.
//! * [`config`] — model variants, priors, hyperparameters.
//! * [`inference`] — log posterior with exact gradients, HMC sampling,
//!   convergence diagnostics, MAP optimization.
//! * [`mle`] — closed-form maximum-likelihood coordinate updates for the
//!   simplified models, with a coordinate-ascent driver.
//! * [`simgen`] — forward simulation of synthetic datasets.
//! * [`harness`] — masking, holdout evaluation, cross-validation and the
//!   sensitivity grid.
//! * [`io`] — CSV ingestion and emission of panels and counts.

pub mod config;
pub mod data;
pub mod epi;
mod error;
pub mod grid;
pub mod infection;
pub mod inference;
pub mod math;
pub mod mle;
pub mod rng;
pub mod transmission;

pub use error::{Error, Result};
