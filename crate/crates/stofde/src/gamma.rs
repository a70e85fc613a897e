//! Gamma function helpers.
//!
//! `gamma_recip` implements the reciprocal with the convention
//! 1/Γ(z) = 0 at z = 0, -1, -2, ... so that series and asymptotic
//! expansions indexed through the poles need no special casing.

use std::f64::consts::PI;

// Lanczos coefficients (g = 7, n = 9), the GSL/Numerical Recipes set.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        // Reflection keeps the Lanczos argument in its accurate range.
        return (PI / sin_pi(x)).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// sin(pi x) with argument reduction done on x itself, so it stays accurate
/// for large |x| and is exactly 0 at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round(); // r in [-1, 1], x = 2k + r
    if r == 0.0 || r == 1.0 || r == -1.0 {
        return 0.0;
    }
    if r.abs() <= 0.5 {
        (PI * r).sin()
    } else if r > 0.0 {
        (PI * (1.0 - r)).sin()
    } else {
        -(PI * (1.0 + r)).sin()
    }
}

/// cos(pi x) via the shifted sine reduction; exactly 0 at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Γ(x). Poles return ±infinity consistent with the approach direction being
/// unspecified (`f64::INFINITY` with the reflection sign).
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        if x > 171.62 {
            return f64::INFINITY;
        }
        return ln_gamma(x).exp();
    }
    if x == x.floor() {
        return f64::INFINITY;
    }
    // Reflection: Γ(x) Γ(1-x) = pi / sin(pi x)
    PI / (sin_pi(x) * gamma(1.0 - x))
}

/// 1/Γ(x) as a total function: exactly 0 at x = 0, -1, -2, ...
/// Saturates to ±infinity where 1/Γ overflows (x below about -178).
pub fn gamma_recip(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 0.5 {
        if x > 171.62 {
            return 0.0; // 1/Γ underflows
        }
        return (-ln_gamma(x)).exp();
    }
    // 1/Γ(x) = sin(pi x)/pi * Γ(1-x)
    let s = sin_pi(x) / PI;
    let lg = ln_gamma(1.0 - x);
    if lg > 709.0 {
        return if s >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    s * lg.exp()
}

/// (ln |Γ(x)|, sign of Γ(x)) for non-pole x; poles report sign 0.
pub fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    if x == x.floor() {
        return (f64::INFINITY, 0.0);
    }
    let s = sin_pi(x);
    let l = (PI / s.abs()).ln() - ln_gamma(1.0 - x);
    (l, s.signum())
}

// ---------------------------------------------------------------------------
// Double-double gamma via Spouge's approximation. Series summation of the
// Mittag-Leffler function cancels terms that dwarf the result, so the terms
// themselves need far more than f64 accuracy; Spouge with a = 26 is good to
// ~1e-22 relative and its coefficients stay small enough that double-double
// evaluation does not lose it again.
// ---------------------------------------------------------------------------

use crate::dd::Dd;
use std::sync::OnceLock;

const SPOUGE_A: usize = 26;

fn spouge_coeffs() -> &'static Vec<Dd> {
    static COEFFS: OnceLock<Vec<Dd>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut c = Vec::with_capacity(SPOUGE_A - 1);
        let mut fact = Dd::ONE;
        for k in 1..SPOUGE_A {
            if k > 1 {
                fact = fact.mul_f64((k - 1) as f64);
            }
            let ak = (SPOUGE_A - k) as f64;
            // (a-k)^(k-1/2) e^(a-k) / (k-1)!, alternating sign
            let ln_mag = Dd::from_f64(ak).ln().mul_f64(k as f64 - 0.5).add_f64(ak);
            let mut v = ln_mag.exp().div(fact);
            if k % 2 == 0 {
                v = v.neg();
            }
            c.push(v);
        }
        c
    })
}

fn sqrt_2pi_dd() -> Dd {
    static V: OnceLock<Dd> = OnceLock::new();
    *V.get_or_init(|| Dd::PI.mul_f64(2.0).sqrt())
}

/// Γ(x) in double-double for 0.5 <= x <= 170.
fn gamma_dd_core(x: Dd) -> Dd {
    let z = x.add_f64(-1.0);
    let za = z.add_f64(SPOUGE_A as f64);
    let mut s = sqrt_2pi_dd();
    for (k, c) in spouge_coeffs().iter().enumerate() {
        s = s.add(c.div(z.add_f64((k + 1) as f64)));
    }
    // (z+a)^(z+1/2) e^{-(z+a)} s
    let ln_pow = za.ln().mul(z.add_f64(0.5)).sub(za);
    ln_pow.exp().mul(s)
}

/// 1/Γ(x) in double-double, for a double-double argument (series callers
/// build Γ(ak + b) arguments whose f64 rounding alone would cost ~1e-14 of
/// term accuracy through the digamma factor). Exactly zero at the poles;
/// arguments above 170 fall back to f64 precision in log space (callers only
/// hit that range with terms far below their working tolerance).
pub(crate) fn gamma_recip_dd(x: Dd) -> Dd {
    let xf = x.to_f64();
    if xf <= 0.0 && xf == xf.floor() && x.lo == 0.0 {
        return Dd::ZERO;
    }
    if xf >= 0.5 {
        if xf <= 170.0 {
            return gamma_dd_core(x).recip();
        }
        return Dd::from_f64(gamma_recip(xf));
    }
    // Shift up: Γ(x) = Γ(x+m) / prod_{j=0}^{m-1} (x+j)
    let m = (0.5 - xf).ceil() as usize;
    let mut prod = Dd::ONE;
    for j in 0..m {
        let f = x.add_f64(j as f64);
        if f.hi == 0.0 {
            return Dd::ZERO;
        }
        prod = prod.mul(f);
    }
    prod.div(gamma_dd_core(x.add_f64(m as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(10.0) - 362880.0).abs() / 362880.0 < 1e-13);
        assert!((gamma(4.7) - 15.431_411_600_047_43).abs() < 1e-12);
        // Γ(-0.5) = -2 sqrt(pi)
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn recip_is_zero_at_nonpositive_integers() {
        for k in 0..40 {
            assert_eq!(gamma_recip(-(k as f64)), 0.0);
        }
        assert!((gamma_recip(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma_recip(-3.7) - 1.0 / gamma(-3.7)).abs() < 1e-12);
    }

    #[test]
    fn reflection_identity_off_the_poles() {
        let mut x: f64 = -19.3;
        while x < 20.0 {
            if (x - x.round()).abs() > 1e-3 && x.abs() > 1e-3 {
                let lhs = gamma(x) * gamma(1.0 - x);
                let rhs = PI / sin_pi(x);
                let rel = ((lhs - rhs) / rhs).abs();
                assert!(rel < 1e-11, "x={x} rel={rel}");
            }
            x += 0.37;
        }
    }

    #[test]
    fn sin_pi_large_arguments() {
        assert_eq!(sin_pi(1e15), 0.0);
        assert!((sin_pi(1e15 + 0.25) - (0.25f64 * PI).sin()).abs() < 1e-12);
        assert!((sin_pi(-7.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dd_gamma_small_integers_and_halves() {
        // Γ(n+1) = n! exactly (factorials are exact in f64 up to 18!)
        let mut fact = 1.0f64;
        for n in 1..=18u32 {
            fact *= n as f64;
            let g = gamma_recip_dd(Dd::from_f64((n + 1) as f64));
            let err = g.mul_f64(fact).add_f64(-1.0).to_f64().abs();
            assert!(err < 1e-21, "n={n} err={err:e}");
        }
        // 1/Γ(0.5) = 1/sqrt(pi)
        let g = gamma_recip_dd(Dd::from_f64(0.5));
        assert!((g.to_f64() - 1.0 / PI.sqrt()).abs() < 1e-16);
        assert_eq!(gamma_recip_dd(Dd::from_f64(-7.0)).to_f64(), 0.0);
    }

    #[test]
    fn dd_gamma_reference_values() {
        // 50-digit reciprocal gamma at binary-exact arguments
        let cases: [(f64, f64, f64); 4] = [
            (15.2, 6.709726077754972e-12, -1.7005552812292336e-28),
            (29.1, 2.345829098169356e-30, -1.5017351303268433e-46),
            (0.7, 0.770383183866566, -5.544955428090929e-17),
            (140.25, 3.0253598074357675e-240, 1.488663740812431e-256),
        ];
        for (x, hi, lo) in cases {
            let g = gamma_recip_dd(Dd::from_f64(x));
            let rel = g.sub(Dd { hi, lo }).to_f64().abs() / hi.abs();
            // coefficient-sum cancellation grows slowly with the argument
            let tol = if x > 100.0 { 5e-20 } else { 3e-21 };
            assert!(rel < tol, "x={x} rel={rel:e}");
        }
    }

    #[test]
    fn dd_gamma_recurrence_consistency() {
        // 1/Γ(x+1) = (1/Γ(x)) / x across the shifted and direct branches
        for &x in &[0.125, -0.375, -5.625, 3.25, 41.5, 120.0] {
            let lhs = gamma_recip_dd(Dd::from_f64(x + 1.0));
            let rhs = gamma_recip_dd(Dd::from_f64(x)).div(Dd::from_f64(x));
            let rel = lhs.sub(rhs).to_f64().abs() / lhs.to_f64().abs().max(1e-300);
            assert!(rel < 1e-20, "x={x} rel={rel}");
        }
    }
}
