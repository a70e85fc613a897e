//! The model constants: spatial rational integrals c1 and c2, the temporal
//! rational integral c31, the denominator-weighted spatial integral c_time,
//! and the temporal increment-variance constant C1 assembled from them.

use super::CovarianceError;
use crate::gamma::cos_pi;
use crate::params::{derive_exponents, ModelParams};
use crate::quad;
use crate::spectral::{hurst_constant, NoiseMeasure};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Quadrature-computed constants with their absolute error estimates.
/// `c2` is populated only in the regime alpha > d - H + 1 where its
/// integral converges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub c1: f64,
    pub c2: Option<f64>,
    pub c31: f64,
    pub c_time: f64,
    #[serde(rename = "C1")]
    pub big_c1: f64,
    /// Absolute error estimates keyed by constant name.
    pub errors: BTreeMap<String, f64>,
}

/// int_{S^{d-1}} prod_j c_{H_j} |w_j|^{1-2H_j} sigma(dw), the spherical
/// factor of the polar reduction. d = 1 gives 2 c_{H_1} (counting measure on
/// {-1, +1}); d = 2 integrates over the angle; d >= 3 is out of desk scale.
pub fn sphere_factor(p: &ModelParams) -> Result<(f64, f64), CovarianceError> {
    let nm = NoiseMeasure::new(p);
    match p.dim() {
        1 => Ok((2.0 * nm.c_h()[0], 0.0)),
        2 => {
            let h1 = p.h_spatial()[0];
            let h2 = p.h_spatial()[1];
            let c = nm.c_product();
            // integrable |cos|,|sin| singularities at the axis angles
            let f = move |th: f64| {
                c * th.cos().abs().powf(1.0 - 2.0 * h1) * th.sin().abs().powf(1.0 - 2.0 * h2)
            };
            let pi2 = std::f64::consts::FRAC_PI_2;
            let q = quad::adaptive(
                f,
                &[0.0, pi2, 2.0 * pi2, 3.0 * pi2, 4.0 * pi2],
                1e-12,
                1e-10,
                4000,
            );
            Ok((q.value, q.abs_error))
        }
        d => Err(CovarianceError::Unsupported(format!(
            "spherical factor for d = {d} (desk scale handles d <= 2)"
        ))),
    }
}

/// Radial integral int_0^inf r^q / (1 + r^{2 alpha}) dr for q > -1,
/// convergent iff q + 1 < 2 alpha.
fn radial_rational(q: f64, two_alpha: f64, rel_tol: f64) -> (f64, f64) {
    let quadr = quad::quad_0_inf(
        move |r: f64| r.powf(q) / (1.0 + r.powf(two_alpha)),
        1.0,
        1e-300,
        rel_tol,
    );
    (quadr.value, quadr.abs_error)
}

/// c1 = int_{R^d} mu(xi) / (1 + |xi|^{2 alpha}) d xi, convergent iff
/// alpha > d - H.
pub fn constant_c1(p: &ModelParams, rel_tol: f64) -> Result<(f64, f64), CovarianceError> {
    let d = p.dim() as f64;
    let h = p.h_total();
    if p.alpha() <= d - h {
        return Err(CovarianceError::DivergentIntegral {
            name: "c1",
            condition: format!("alpha > d - H (alpha = {}, d - H = {})", p.alpha(), d - h),
        });
    }
    let (s, se) = sphere_factor(p)?;
    let (r, re) = radial_rational(2.0 * d - 2.0 * h - 1.0, 2.0 * p.alpha(), rel_tol);
    Ok((s * r, s * re + se * r))
}

/// c2 = int_{R^d} mu(xi) |xi|^2 / (1 + |xi|^{2 alpha}) d xi, convergent iff
/// alpha > d - H + 1.
pub fn constant_c2(p: &ModelParams, rel_tol: f64) -> Result<(f64, f64), CovarianceError> {
    let d = p.dim() as f64;
    let h = p.h_total();
    if p.alpha() <= d - h + 1.0 {
        return Err(CovarianceError::DivergentIntegral {
            name: "c2",
            condition: format!(
                "alpha > d - H + 1 (alpha = {}, d - H + 1 = {})",
                p.alpha(),
                d - h + 1.0
            ),
        });
    }
    let (s, se) = sphere_factor(p)?;
    let (r, re) = radial_rational(2.0 * d - 2.0 * h + 1.0, 2.0 * p.alpha(), rel_tol);
    Ok((s * r, s * re + se * r))
}

/// c31 = int_R |tau|^{1-2gamma-2H0} / (|tau|^{2beta} + 2|tau|^beta cos(pi
/// beta/2) + 1) d tau. Requires gamma < 1 - H0 (origin) and the standing
/// existence condition 2beta + 2gamma + 2H0 > 2 (tail).
pub fn constant_c31(p: &ModelParams, rel_tol: f64) -> Result<(f64, f64), CovarianceError> {
    let q = 1.0 - 2.0 * p.gamma_rl() - 2.0 * p.h0();
    if q <= -1.0 {
        return Err(CovarianceError::DivergentIntegral {
            name: "c31",
            condition: format!(
                "gamma < 1 - H0 (gamma = {}, 1 - H0 = {})",
                p.gamma_rl(),
                1.0 - p.h0()
            ),
        });
    }
    let beta = p.beta();
    if q - 2.0 * beta >= -1.0 {
        return Err(CovarianceError::DivergentIntegral {
            name: "c31",
            condition: "beta + gamma + H0 > 1".to_string(),
        });
    }
    let cb = cos_pi(0.5 * beta);
    // integrand is even: twice the half line
    let quadr = quad::quad_0_inf(
        move |t: f64| {
            let tb = t.powf(beta);
            t.powf(q) / (tb * tb + 2.0 * cb * tb + 1.0)
        },
        1.0,
        1e-300,
        rel_tol,
    );
    Ok((2.0 * quadr.value, 2.0 * quadr.abs_error))
}

/// c_time = int_{R^d} mu(xi) / (1 + 2 |xi|^alpha cos(pi beta/2)
/// + |xi|^{2 alpha}) d xi, the spatial factor of C1. Convergent iff
/// alpha > d - H.
pub fn constant_c_time(p: &ModelParams, rel_tol: f64) -> Result<(f64, f64), CovarianceError> {
    let d = p.dim() as f64;
    let h = p.h_total();
    if p.alpha() <= d - h {
        return Err(CovarianceError::DivergentIntegral {
            name: "c_time",
            condition: format!("alpha > d - H (alpha = {}, d - H = {})", p.alpha(), d - h),
        });
    }
    let (s, se) = sphere_factor(p)?;
    let alpha = p.alpha();
    let cb = cos_pi(0.5 * p.beta());
    let q = 2.0 * d - 2.0 * h - 1.0;
    let quadr = quad::quad_0_inf(
        move |r: f64| {
            let ra = r.powf(alpha);
            r.powf(q) / (1.0 + 2.0 * cb * ra + ra * ra)
        },
        1.0,
        1e-300,
        rel_tol,
    );
    Ok((s * quadr.value, s * quadr.abs_error + se * quadr.value))
}

/// int_R (1 - cos tau)/|tau|^{2 theta + 1} d tau for theta in (0,1):
/// adaptive middle, analytic power tail, integration-by-parts bound for the
/// oscillatory remainder.
pub fn one_minus_cos_integral(theta: f64, rel_tol: f64) -> Result<(f64, f64), CovarianceError> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(CovarianceError::DivergentIntegral {
            name: "one_minus_cos",
            condition: format!("theta in (0,1), got {theta}"),
        });
    }
    let s = 2.0 * theta + 1.0;
    let t_cut = 240.0;
    let f = move |t: f64| (1.0 - t.cos()) / t.powf(s);
    let mut breaks: Vec<f64> = vec![0.0, 1e-4, 1e-2, 0.5];
    let mut t = 2.0;
    while t < t_cut {
        breaks.push(t);
        t += std::f64::consts::PI;
    }
    breaks.push(t_cut);
    let q = quad::adaptive(f, &breaks, 1e-300, rel_tol, 8000);
    // tail: int (1 - cos t) t^{-s} = T^{1-s}/(s-1) - int cos(t) t^{-s}
    let power_tail = t_cut.powf(1.0 - s) / (s - 1.0);
    let (osc, osc_err) = cos_power_tail(t_cut, s);
    let value = q.value + power_tail - osc;
    let est = q.abs_error + osc_err + power_tail * 1e-14;
    Ok((2.0 * value, 2.0 * est))
}

/// int_T^inf cos(t) t^{-s} dt by four integrations by parts; the remainder
/// bound s(s+1)(s+2)(s+3) 2 T^{-s-4} is returned as the error estimate.
pub(crate) fn cos_power_tail(t: f64, s: f64) -> (f64, f64) {
    let (sin_t, cos_t) = (t.sin(), t.cos());
    let v = -sin_t * t.powf(-s) + s * cos_t * t.powf(-s - 1.0)
        - s * (s + 1.0) * (-sin_t * t.powf(-s - 2.0) + (s + 2.0) * cos_t * t.powf(-s - 3.0));
    let rem = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * 2.0 * t.powf(-s - 4.0);
    (-v, rem)
    // note: I(s,T) = int_T^inf cos t / t^s dt = -(-sin T T^{-s} + ...)
}

/// C1 = 2 C_{H0} * int_R (1-cos tau)/|tau|^{2 theta1 + 1} d tau * c_time.
pub fn constant_big_c1(p: &ModelParams, rel_tol: f64) -> Result<(f64, f64), CovarianceError> {
    let theta1 = derive_exponents(p).theta1;
    let (ic, ic_err) = one_minus_cos_integral(theta1, rel_tol)?;
    let (ct, ct_err) = constant_c_time(p, rel_tol)?;
    let c_h0 = hurst_constant(p.h0());
    let v = 2.0 * c_h0 * ic * ct;
    let e = 2.0 * c_h0 * (ic_err * ct + ic * ct_err);
    Ok((v, e))
}

/// Assemble the full report. c1, c31, c_time and C1 are required (divergence
/// is an error); c2 is reported only when its convergence condition holds.
pub fn compute_constants(p: &ModelParams, rel_tol: f64) -> Result<ConstantsReport, CovarianceError> {
    let (c1, c1e) = constant_c1(p, rel_tol)?;
    let (c31, c31e) = constant_c31(p, rel_tol)?;
    let (c_time, cte) = constant_c_time(p, rel_tol)?;
    let (big_c1, bce) = constant_big_c1(p, rel_tol)?;
    let mut errors = BTreeMap::new();
    errors.insert("c1".to_string(), c1e);
    errors.insert("c31".to_string(), c31e);
    errors.insert("c_time".to_string(), cte);
    errors.insert("C1".to_string(), bce);
    let c2 = match constant_c2(p, rel_tol) {
        Ok((v, e)) => {
            errors.insert("c2".to_string(), e);
            Some(v)
        }
        Err(CovarianceError::DivergentIntegral { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ConstantsReport {
        c1,
        c2,
        c31,
        c_time,
        big_c1,
        errors,
    })
}
