//! Variograms, covariances and model constants by adaptive quadrature.
//!
//! All integrals are evaluated with explicit origin/tail handling: the
//! integrands have known power-law exponents at both ends, so tails beyond a
//! cutoff are summed analytically (with oscillatory parts bounded by
//! integration by parts) and the bounded middle goes through the adaptive
//! Gauss-Kronrod engine.

mod conditioning;
mod constants;
mod solution;
mod variogram;
mod vbound;

pub use conditioning::conditional_variance;
pub use constants::{compute_constants, constant_big_c1, constant_c1, constant_c2, constant_c31, constant_c_time, one_minus_cos_integral, sphere_factor, ConstantsReport};
pub use solution::{covariance_u, covariance_u_freq};
pub use variogram::{cov_from_variogram, variogram_full, variogram_space, variogram_time, SpaceTimePoint, VariogramGrid, VariogramMethod, VariogramValue};
pub use vbound::{b2_multiplier, v_increment_bound, v_increment_bound_space, v_increment_bound_time};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CovarianceError {
    #[error("divergent integral {name}: requires {condition}")]
    DivergentIntegral {
        name: &'static str,
        condition: String,
    },
    #[error("quadrature non-convergence in {what}: estimate {est:e}, worst subregion [{lo}, {hi}]")]
    QuadratureNonconvergence {
        what: String,
        est: f64,
        lo: f64,
        hi: f64,
    },
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("conditioning matrix singular after jitter escalation")]
    SingularConditioning,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Mlf(#[from] crate::mlf::MlfError),
}
