//! Numerical library for a stochastic space-time fractional diffusion
//! equation driven by Gaussian noise that is fractional in time and space.
//!
//! The crate exposes the analytic machinery of the model:
//!
//! * [`params`] — model parameters, regularity exponents, existence checks;
//! * [`mlf`] — Mittag-Leffler evaluation and the fundamental-solution
//!   transform identities;
//! * [`spectral`] — explicit spectral densities of the noise and of the
//!   stationary-increment fields, with their exact scaling laws;
//! * [`covariance`] — variograms, covariances and the model constants by
//!   adaptive quadrature;
//! * [`sampling`] — exact Gaussian sampling of the fields on desk-scale
//!   grids with reproducible seeding;
//! * [`analysis`] — Hoelder-exponent estimation, modulus-of-continuity
//!   statistics, small ball Monte Carlo and entropy machinery.

pub mod covariance;
mod dd;
pub mod gamma;
pub mod mlf;
pub mod params;
pub mod quad;
pub mod spectral;

pub use gamma::gamma_recip;
pub use params::{
    check_conditions, derive_exponents, she_benchmark, ConditionReport, DerivedExponents,
    ModelParams,
};
