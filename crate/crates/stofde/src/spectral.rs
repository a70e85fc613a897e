//! Explicit spectral densities of the driving noise and of the
//! stationary-increment fields, together with their exact scaling laws.
//!
//! Singular points (zero frequencies meeting negative exponents) return the
//! +infinity sentinel; quadratures in the covariance module avoid axis nodes
//! by construction.

use crate::gamma::{cos_pi, gamma};
use crate::params::{derive_exponents, ModelParams};
use std::f64::consts::PI;

/// c_H = (1/2pi) Γ(2H+1) sin(pi H), the constant of the |xi|^{1-2H} spectral
/// factor of fractional noise with Hurst index H.
pub fn hurst_constant(h: f64) -> f64 {
    gamma(2.0 * h + 1.0) * (PI * h).sin() / (2.0 * PI)
}

/// Spectral measure density factors of the spatial noise:
/// mu(d xi) = prod_j c_{H_j} |xi_j|^{1-2H_j} d xi.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseMeasure {
    h_spatial: Vec<f64>,
    c_h: Vec<f64>,
}

impl NoiseMeasure {
    pub fn new(p: &ModelParams) -> Self {
        let h_spatial = p.h_spatial().to_vec();
        let c_h = h_spatial.iter().map(|&h| hurst_constant(h)).collect();
        NoiseMeasure { h_spatial, c_h }
    }

    pub fn h_spatial(&self) -> &[f64] {
        &self.h_spatial
    }

    pub fn c_h(&self) -> &[f64] {
        &self.c_h
    }

    /// Product of the per-axis constants.
    pub fn c_product(&self) -> f64 {
        self.c_h.iter().product()
    }
}

/// Temporal spectral constant C_{H0} under the Fourier convention
/// F phi(xi) = int e^{-i x xi} phi(x) dx, i.e. the exact analogue of the
/// spatial constants. Validated by the white-in-time consistency check in
/// the covariance module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalKernelH0 {
    pub h0: f64,
    pub c_h0: f64,
}

impl TemporalKernelH0 {
    pub fn new(p: &ModelParams) -> Self {
        TemporalKernelH0 {
            h0: p.h0(),
            c_h0: hurst_constant(p.h0()),
        }
    }
}

/// One evaluation of a spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint {
    pub tau: f64,
    pub xi: Vec<f64>,
    pub density: f64,
}

/// Noise spectral density prod_j c_{H_j} |xi_j|^{1-2H_j}.
/// Axes with H_j > 1/2 give the +infinity sentinel at xi_j = 0.
pub fn mu_density(xi: &[f64], nm: &NoiseMeasure) -> f64 {
    assert_eq!(xi.len(), nm.h_spatial.len(), "dimension mismatch");
    let mut out = 1.0;
    for ((&x, &h), &c) in xi.iter().zip(&nm.h_spatial).zip(&nm.c_h) {
        out *= c * x.abs().powf(1.0 - 2.0 * h);
    }
    out
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Denominator |tau|^{2 beta} + 2 |xi|^alpha |tau|^beta cos(pi beta / 2)
/// + |xi|^{2 alpha} of the space-time spectral density. Strictly positive
/// away from the origin for beta in (0, 2).
pub fn denominator(tau: f64, xi_norm: f64, p: &ModelParams) -> f64 {
    let tb = tau.abs().powf(p.beta());
    let xa = xi_norm.powf(p.alpha());
    tb * tb + 2.0 * xa * tb * cos_pi(0.5 * p.beta()) + xa * xa
}

/// Spectral density of the space-time stationary-increment field:
/// C_{H0} |tau|^{1-2gamma-2H0} mu(xi) / denominator(tau, xi).
pub fn f_u(tau: f64, xi: &[f64], p: &ModelParams) -> f64 {
    let nm = NoiseMeasure::new(p);
    f_u_with(tau, xi, p, &nm, hurst_constant(p.h0()))
}

/// Same as [`f_u`] with precomputed noise constants for hot loops.
pub fn f_u_with(tau: f64, xi: &[f64], p: &ModelParams, nm: &NoiseMeasure, c_h0: f64) -> f64 {
    let num = c_h0 * tau.abs().powf(1.0 - 2.0 * p.gamma_rl() - 2.0 * p.h0()) * mu_density(xi, nm);
    num / denominator(tau, norm(xi), p)
}

/// Spectral density of a temporal slice: c_time / |tau|^{2 theta1 + 1};
/// `c_time` is the caller-supplied constant (see the covariance module).
pub fn f_time(tau: f64, p: &ModelParams, c_time: f64) -> f64 {
    let theta1 = derive_exponents(p).theta1;
    c_time / tau.abs().powf(2.0 * theta1 + 1.0)
}

/// Spectral density of a spatial slice:
/// 2 C_{H0} c31 mu(xi) / |xi|^{2 alpha + (alpha/beta)(2 gamma + 2 H0 - 2)},
/// with `c31` the temporal rational integral from the covariance module.
pub fn f_space(xi: &[f64], p: &ModelParams, c31: f64) -> f64 {
    let nm = NoiseMeasure::new(p);
    let expo = 2.0 * p.alpha()
        + (p.alpha() / p.beta()) * (2.0 * p.gamma_rl() + 2.0 * p.h0() - 2.0);
    2.0 * hurst_constant(p.h0()) * c31 * mu_density(xi, &nm) / norm(xi).powf(expo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::she_benchmark;
    use crate::params::ModelParams;

    struct TestRng(u64);
    impl TestRng {
        fn next_f64(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
            lo + (hi - lo) * self.next_f64()
        }
    }

    #[test]
    fn white_noise_constant() {
        // c_{1/2} = (1/2pi) Γ(2) sin(pi/2) = 1/(2pi)
        assert!((hurst_constant(0.5) - 1.0 / (2.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn mu_density_flat_for_white_noise() {
        let nm = NoiseMeasure::new(&she_benchmark());
        for &xi in &[0.01, 1.0, 173.2] {
            assert!((mu_density(&[xi], &nm) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        }
    }

    #[test]
    fn mu_density_product_structure() {
        let p = ModelParams::new(3.0, 1.0, 0.0, 0.5, vec![0.3, 0.7]).unwrap();
        let nm = NoiseMeasure::new(&p);
        let v = mu_density(&[1.0, 1.0], &nm);
        assert!((v - hurst_constant(0.3) * hurst_constant(0.7)).abs() < 1e-16);
        // H_j > 1/2 gives the singular sentinel on its axis
        assert_eq!(mu_density(&[1.0, 0.0], &nm), f64::INFINITY);
        // H_j < 1/2 vanishes on its axis instead
        assert_eq!(mu_density(&[0.0, 1.0], &nm), 0.0);
    }

    #[test]
    fn denominator_cosine_vanishes_at_beta_one() {
        let p = she_benchmark();
        // |tau|^2 + |xi|^4 exactly: the cross term carries cos(pi/2) = 0
        let d = denominator(2.0, 3.0, &p);
        assert_eq!(d, 4.0 + 81.0);
    }

    #[test]
    fn f_u_operator_scaling_law() {
        // f_U(c^{1/theta1} tau, c^{1/theta2} xi) = c^{-(2+Q)} f_U(tau, xi)
        let params = [
            she_benchmark(),
            ModelParams::new(2.0, 0.8, 0.1, 0.6, vec![0.5]).unwrap(),
            ModelParams::new(3.0, 1.4, 0.2, 0.55, vec![0.4, 0.7]).unwrap(),
        ];
        let mut rng = TestRng(0xfeed_beef);
        for p in &params {
            let e = derive_exponents(p);
            let q = e.q_dim.unwrap();
            for _ in 0..34 {
                let c = rng.uniform(0.1, 10.0);
                let tau = rng.uniform(0.2, 5.0);
                let xi: Vec<f64> = (0..p.dim()).map(|_| rng.uniform(0.2, 5.0)).collect();
                let scaled_xi: Vec<f64> =
                    xi.iter().map(|x| x * c.powf(1.0 / e.theta2)).collect();
                let lhs = f_u(c.powf(1.0 / e.theta1) * tau, &scaled_xi, p);
                let rhs = c.powf(-(2.0 + q)) * f_u(tau, &xi, p);
                let rel = (lhs - rhs).abs() / rhs;
                assert!(rel < 1e-12, "rel={rel:e}");
            }
        }
    }

    #[test]
    fn f_time_power_law() {
        let p = she_benchmark(); // theta1 = 1/4 -> exponent 1.5
        let r = f_time(2.0, &p, 1.0) / f_time(1.0, &p, 1.0);
        assert!((r - 2f64.powf(-1.5)).abs() < 1e-15);
        let p2 = ModelParams::new(2.0, 1.0, 0.0, 0.7, vec![0.5]).unwrap(); // theta1=0.45
        let r = f_time(3.0, &p2, 0.7) / f_time(1.0, &p2, 0.7);
        assert!((r - 3f64.powf(-1.9)).abs() / r < 1e-13);
        assert_eq!(f_time(0.0, &p, 1.0), f64::INFINITY);
    }

    #[test]
    fn f_space_scaling_law() {
        let params = [
            she_benchmark(),
            ModelParams::new(2.0, 0.8, 0.1, 0.6, vec![0.5]).unwrap(),
        ];
        for p in &params {
            let e = derive_exponents(p);
            let d = p.dim() as f64;
            let c: f64 = 3.0;
            for &xi in &[0.3, 1.0, 4.2] {
                let lhs = f_space(&[c.powf(1.0 / e.theta2) * xi], p, 1.3);
                let rhs = c.powf(-(2.0 + d / e.theta2)) * f_space(&[xi], p, 1.3);
                let rel = (lhs - rhs).abs() / rhs;
                assert!(rel < 1e-12, "rel={rel:e}");
            }
        }
    }

    #[test]
    fn f_space_exponent_reductions() {
        // beta=1, gamma=0, H0=1/2: the full exponent collapses to alpha
        let p = she_benchmark();
        let r = f_space(&[2.0], &p, 1.0) / f_space(&[1.0], &p, 1.0);
        assert!((r - 2f64.powf(-2.0)).abs() < 1e-14);
        // d=1, H1=1/2: f_space proportional to |xi|^{-(2 theta2 + 1)}
        let p2 = ModelParams::new(2.0, 0.8, 0.1, 0.6, vec![0.5]).unwrap();
        let t2 = derive_exponents(&p2).theta2;
        let r = f_space(&[2.0], &p2, 1.0) / f_space(&[1.0], &p2, 1.0);
        assert!((r - 2f64.powf(-(2.0 * t2 + 1.0))).abs() / r < 1e-13);
    }

    #[test]
    fn densities_nonnegative_everywhere() {
        // includes beta in (1,2) where the denominator cross term is negative
        let params = [
            she_benchmark(),
            ModelParams::new(2.0, 1.5, 0.1, 0.6, vec![0.5]).unwrap(),
            ModelParams::new(1.5, 1.9, 0.0, 0.5, vec![0.3]).unwrap(),
            ModelParams::new(4.0, 1.2, 0.3, 0.55, vec![0.45, 0.8]).unwrap(),
        ];
        let mut rng = TestRng(0x0dd5_eed);
        for p in &params {
            for _ in 0..2500 {
                let tau = rng.uniform(-30.0, 30.0);
                let xi: Vec<f64> = (0..p.dim())
                    .map(|_| {
                        let s = rng.uniform(-1.0, 1.0).signum();
                        s * 10f64.powf(rng.uniform(-3.0, 2.0))
                    })
                    .collect();
                let v = f_u(tau, &xi, p);
                assert!(v >= 0.0, "negative density at tau={tau} xi={xi:?}");
                let d = denominator(tau, norm(&xi), p);
                assert!(d > 0.0 || (tau == 0.0 && norm(&xi) == 0.0));
            }
        }
    }
}
