//! Model parameters of the fractional diffusion field and the closed-form
//! exponent/condition arithmetic derived from them.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("invalid parameter {name}: {reason} (got {value})")]
    Invalid {
        name: &'static str,
        reason: &'static str,
        value: f64,
    },
    #[error("missing config key \"{0}\"")]
    MissingKey(String),
    #[error("unexpected config key \"{0}\"")]
    UnexpectedKey(String),
}

/// Parameter tuple (alpha, beta, gamma, d, H0, H1..Hd) of the equation and
/// its driving noise. Immutable once constructed; construction enforces
///
/// * alpha > 0, 0 < beta < 2, 0 <= gamma < 1,
/// * 1/2 <= H0 < 1 (white or positively correlated in time),
/// * every spatial Hurst index in (0,1), d = len >= 1 (so 0 < H < d).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    gamma_rl: f64,
    h0: f64,
    h_spatial: Vec<f64>,
}

impl ModelParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma_rl: f64,
        h0: f64,
        h_spatial: Vec<f64>,
    ) -> Result<Self, ParamsError> {
        fn check(ok: bool, name: &'static str, reason: &'static str, value: f64) -> Result<(), ParamsError> {
            if ok {
                Ok(())
            } else {
                Err(ParamsError::Invalid { name, reason, value })
            }
        }
        check(alpha.is_finite() && alpha > 0.0, "alpha", "must be > 0", alpha)?;
        check(beta > 0.0 && beta < 2.0, "beta", "must lie in (0, 2)", beta)?;
        check(
            (0.0..1.0).contains(&gamma_rl),
            "gamma",
            "must lie in [0, 1)",
            gamma_rl,
        )?;
        check(
            (0.5..1.0).contains(&h0),
            "H0",
            "must lie in [1/2, 1)",
            h0,
        )?;
        check(!h_spatial.is_empty(), "d", "needs at least one spatial Hurst index", 0.0)?;
        for &h in &h_spatial {
            check(h > 0.0 && h < 1.0, "Hj", "must lie in (0, 1)", h)?;
        }
        Ok(ModelParams {
            alpha,
            beta,
            gamma_rl,
            h0,
            h_spatial,
        })
    }

    /// Parse from flat keys: alpha, beta, gamma, d, H0, H1..Hd.
    /// Rejects missing and unexpected keys.
    pub fn from_key_values(map: &BTreeMap<String, f64>) -> Result<Self, ParamsError> {
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| ParamsError::MissingKey(k.to_string()))
        };
        let d = get("d")?;
        if d < 1.0 || d.fract() != 0.0 {
            return Err(ParamsError::Invalid {
                name: "d",
                reason: "must be a positive integer",
                value: d,
            });
        }
        let d = d as usize;
        let mut h_spatial = Vec::with_capacity(d);
        for j in 1..=d {
            h_spatial.push(get(&format!("H{j}"))?);
        }
        let expected = 5 + d; // alpha, beta, gamma, d, H0, H1..Hd
        if map.len() != expected {
            for k in map.keys() {
                let known = matches!(k.as_str(), "alpha" | "beta" | "gamma" | "d" | "H0")
                    || k.strip_prefix('H')
                        .and_then(|s| s.parse::<usize>().ok())
                        .is_some_and(|j| j >= 1 && j <= d);
                if !known {
                    return Err(ParamsError::UnexpectedKey(k.clone()));
                }
            }
        }
        ModelParams::new(get("alpha")?, get("beta")?, get("gamma")?, get("H0")?, h_spatial)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma_rl(&self) -> f64 {
        self.gamma_rl
    }
    pub fn h0(&self) -> f64 {
        self.h0
    }
    pub fn h_spatial(&self) -> &[f64] {
        &self.h_spatial
    }
    pub fn dim(&self) -> usize {
        self.h_spatial.len()
    }
    /// H = sum of the spatial Hurst indices.
    pub fn h_total(&self) -> f64 {
        self.h_spatial.iter().sum()
    }
}

/// Regularity exponents of the solution field.
///
/// theta2 is stored as (alpha/beta) * theta1, which is the identity the two
/// closed forms satisfy; `q_dim` is populated only when both are positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedExponents {
    pub theta1: f64,
    pub theta2: f64,
    pub q_dim: Option<f64>,
}

/// Time Hoelder exponent: theta1 = beta + gamma + H0 - 1 - (beta/alpha)(d - H).
pub fn derive_exponents(p: &ModelParams) -> DerivedExponents {
    let d = p.dim() as f64;
    let theta1 = p.beta + p.gamma_rl + p.h0 - 1.0 - (p.beta / p.alpha) * (d - p.h_total());
    let theta2 = (p.alpha / p.beta) * theta1;
    let q_dim = if theta1 > 0.0 && theta2 > 0.0 {
        Some(1.0 / theta1 + d / theta2)
    } else {
        None
    };
    DerivedExponents {
        theta1,
        theta2,
        q_dim,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DalangCheck {
    pub holds: bool,
    /// Signed distance alpha + (alpha/beta) min(gamma + H0 - 1, 0) - (d - H).
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UExistCheck {
    pub theta1_lt_1: bool,
    pub theta2_lt_1: bool,
    pub gamma_lt_1_minus_h0: bool,
}

/// Every existence/regularity condition evaluated as closed-form
/// inequalities. All inequalities are strict: boundary cases report `false`
/// and the raw margin is kept so callers can see near-boundary parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub dalang: DalangCheck,
    pub u_exist: UExistCheck,
    /// alpha - d + H > 1: the smooth remainder field is differentiable.
    pub v_smooth_space: bool,
    /// beta + gamma <= 2, or beta + gamma > 2 with -H0 + (beta/alpha)(d-H) < 1.
    pub small_ball_extra: bool,
}

pub fn check_conditions(p: &ModelParams) -> ConditionReport {
    let d = p.dim() as f64;
    let h = p.h_total();
    let exps = derive_exponents(p);
    let margin = p.alpha + (p.alpha / p.beta) * (p.gamma_rl + p.h0 - 1.0).min(0.0) - (d - h);
    let bg2 = p.beta + p.gamma_rl - 2.0;
    ConditionReport {
        dalang: DalangCheck {
            holds: margin > 0.0,
            margin,
        },
        u_exist: UExistCheck {
            theta1_lt_1: exps.theta1 < 1.0,
            theta2_lt_1: exps.theta2 < 1.0,
            gamma_lt_1_minus_h0: p.gamma_rl < 1.0 - p.h0,
        },
        v_smooth_space: p.alpha - d + h > 1.0,
        small_ball_extra: bg2 <= 0.0 || -p.h0 + (p.beta / p.alpha) * (d - h) < 1.0,
    }
}

/// Heat-equation benchmark parameters (alpha=2, beta=1, gamma=0, white noise, d=1).
pub fn she_benchmark() -> ModelParams {
    ModelParams::new(2.0, 1.0, 0.0, 0.5, vec![0.5]).expect("benchmark parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, beta: f64, gamma: f64, h0: f64, hs: &[f64]) -> ModelParams {
        ModelParams::new(alpha, beta, gamma, h0, hs.to_vec()).unwrap()
    }

    #[test]
    fn she_exponents() {
        let e = derive_exponents(&she_benchmark());
        assert_eq!(e.theta1, 0.25);
        assert_eq!(e.theta2, 0.5);
        assert_eq!(e.q_dim, Some(6.0));
    }

    #[test]
    fn shifted_h0_exponents() {
        let e = derive_exponents(&params(2.0, 1.0, 0.0, 0.7, &[0.5]));
        assert!((e.theta1 - 0.45).abs() < 1e-15);
        assert!((e.theta2 - 0.9).abs() < 1e-15);
    }

    #[test]
    fn theta2_is_scaled_theta1() {
        // sampled parameter sweep
        let mut failures = 0;
        for &alpha in &[0.7, 1.3, 2.0, 3.5] {
            for &beta in &[0.4, 0.8, 1.0, 1.6] {
                for &gamma in &[0.0, 0.3, 0.7] {
                    for &h0 in &[0.5, 0.65, 0.9] {
                        for hs in [vec![0.3], vec![0.5, 0.7]] {
                            let p = params(alpha, beta, gamma, h0, &hs);
                            let e = derive_exponents(&p);
                            let direct = alpha - hs.len() as f64 + p.h_total()
                                + (alpha / beta) * (gamma + h0 - 1.0);
                            if (e.theta2 - direct).abs() > 1e-12 * direct.abs().max(1.0) {
                                failures += 1;
                            }
                            if (e.theta2 - (alpha / beta) * e.theta1).abs() != 0.0 {
                                failures += 1; // exact by construction
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(failures, 0);
    }

    #[test]
    fn dalang_margin_values() {
        let c = check_conditions(&she_benchmark());
        assert!(c.dalang.holds);
        assert!((c.dalang.margin - 0.5).abs() < 1e-15);

        // alpha=1 variant sits exactly on the boundary: strict inequality fails
        let c = check_conditions(&params(1.0, 1.0, 0.0, 0.5, &[0.5]));
        assert!(!c.dalang.holds);
        assert!(c.dalang.margin.abs() < 1e-15);
    }

    #[test]
    fn gamma_upper_bound_check() {
        let c = check_conditions(&params(2.0, 1.0, 0.6, 0.5, &[0.5]));
        assert!(!c.u_exist.gamma_lt_1_minus_h0);
    }

    #[test]
    fn margin_monotone_in_hurst_indices() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..20 {
            let h1 = 0.05 + 0.9 * i as f64 / 19.0;
            let m = check_conditions(&params(1.2, 0.9, 0.1, 0.6, &[h1])).dalang.margin;
            assert!(m > prev);
            prev = m;
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..20 {
            let h0 = 0.5 + 0.49 * i as f64 / 19.0;
            let m = check_conditions(&params(1.2, 0.9, 0.1, h0, &[0.4])).dalang.margin;
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn report_consistent_with_definitions_on_grid() {
        // u_exist all true plus positive exponents must imply Dalang's
        // condition never contradicts the definitions.
        for &alpha in &[0.8, 1.5, 2.0, 4.0] {
            for &beta in &[0.5, 1.0, 1.5] {
                for &gamma in &[0.0, 0.2, 0.45] {
                    for &h0 in &[0.5, 0.7] {
                        let p = params(alpha, beta, gamma, h0, &[0.5]);
                        let e = derive_exponents(&p);
                        let c = check_conditions(&p);
                        if c.dalang.holds {
                            assert!(e.theta1 > 0.0 && e.theta2 > 0.0, "{p:?}");
                            assert!(e.q_dim.is_some());
                        }
                        assert_eq!(c.u_exist.theta1_lt_1, e.theta1 < 1.0);
                        assert_eq!(c.u_exist.theta2_lt_1, e.theta2 < 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn construction_rejects_out_of_range() {
        assert!(ModelParams::new(0.0, 1.0, 0.0, 0.5, vec![0.5]).is_err());
        assert!(ModelParams::new(2.0, 2.0, 0.0, 0.5, vec![0.5]).is_err());
        assert!(ModelParams::new(2.0, 1.0, 1.0, 0.5, vec![0.5]).is_err());
        // negatively correlated temporal noise is outside the model class
        assert!(ModelParams::new(2.0, 1.0, 0.0, 0.3, vec![0.5]).is_err());
        assert!(ModelParams::new(2.0, 1.0, 0.0, 0.5, vec![]).is_err());
        assert!(ModelParams::new(2.0, 1.0, 0.0, 0.5, vec![1.0]).is_err());
    }

    #[test]
    fn key_value_parsing() {
        let mut m = BTreeMap::new();
        for (k, v) in [
            ("alpha", 2.0),
            ("beta", 1.0),
            ("gamma", 0.0),
            ("d", 1.0),
            ("H0", 0.5),
            ("H1", 0.5),
        ] {
            m.insert(k.to_string(), v);
        }
        let p = ModelParams::from_key_values(&m).unwrap();
        assert_eq!(p, she_benchmark());

        m.remove("beta");
        assert_eq!(
            ModelParams::from_key_values(&m),
            Err(ParamsError::MissingKey("beta".into()))
        );
        m.insert("beta".into(), 1.0);
        m.insert("H7".into(), 0.5);
        assert!(matches!(
            ModelParams::from_key_values(&m),
            Err(ParamsError::UnexpectedKey(_))
        ));
    }
}
