//! Zero-inflated Poisson regression in the mean/dispersion parameterization.
//!
//! The response is modeled as `Y_i ~ ZIP(mu_i, phi_i)` with `E[Y_i] = mu_i`
//! and `Var[Y_i] = mu_i (1 + phi_i)`, and both parameters get their own
//! linear predictor and link. The crate covers the distribution itself,
//! maximum-likelihood fitting with analytic derivatives, randomized quantile
//! residuals, simulated envelopes, case-deletion influence, and a Monte Carlo
//! harness for estimator bias and MSE.

pub mod diagnostics;
pub mod dist;
pub mod error;
mod par;
pub mod regression;
pub mod rng;
pub mod simulation;
pub mod special;

pub use dist::{LogPmfDerivatives, Parameterization, Zip1, Zip2, Zip3, ZipParams};
pub use error::{Error, Result};
pub use regression::{fit, FitOptions, FitResult, Link, ModelSpec, Theta};
