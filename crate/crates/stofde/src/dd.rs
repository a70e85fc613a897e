//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` of two
//! `f64`s, giving roughly 31 significant decimal digits.
//!
//! Used by the Mittag-Leffler series summation, where alternating terms can
//! exceed the final sum by many orders of magnitude. Only the operations the
//! series needs are implemented.

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Like `two_sum` but requires `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via FMA: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141_592_653_589_793,
        lo: 1.224_646_799_147_353_2e-16,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two f64 values.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[allow(dead_code)]
    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, other);
        let s2 = s2 + self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, other);
        let p2 = p2 + self.lo * other;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::from_f64(f64::NAN) };
        }
        // One Newton step on 1/sqrt from an f64 seed reaches dd precision.
        let x0 = self.hi.sqrt();
        let s = Dd::from_f64(x0);
        let d = self.sub(s.mul(s));
        s.add(d.div(s.mul_f64(2.0)))
    }

    /// exp(self); saturates to 0 / +inf outside the f64 exponent range.
    pub fn exp(self) -> Dd {
        let x = self.to_f64();
        if x < -745.0 {
            return Dd::ZERO;
        }
        if x > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        let k = (x / std::f64::consts::LN_2).round();
        let r = self.sub(Dd::LN2.mul_f64(k));
        // |r| <= ln2/2; Taylor to below dd roundoff. The factorial reciprocal
        // must itself be a dd value or its f64 rounding caps the accuracy.
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for n in 1..40 {
            term = term.mul(r).div(Dd::from_f64(n as f64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        let scale = 2f64.powi(k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    /// Natural log for positive values; Newton refinement of the f64 seed.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "dd ln of non-positive value");
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            // y += x * exp(-y) - 1
            let e = y.neg().exp();
            y = y.add(self.mul(e).add_f64(-1.0));
        }
        y
    }

    #[allow(dead_code)]
    pub fn powi(self, n: u64) -> Dd {
        let mut base = self;
        let mut n = n;
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_cancelled_bits() {
        let a = Dd::from_f64(1e16).add_f64(1.0);
        let b = a.add_f64(-1e16);
        assert_eq!(b.to_f64(), 1.0);
    }

    #[test]
    fn mul_matches_integer_arithmetic() {
        let a = Dd::from_f64(94906265.0); // ~2^26.5, squares exceed 2^53
        let sq = a.mul(a);
        assert_eq!(sq.hi + sq.lo, 94906265.0 * 94906265.0);
        let exact = 94906265u128 * 94906265u128;
        assert_eq!(sq.hi as u128 + sq.lo as u128, exact);
    }

    #[test]
    fn exp_and_ln_roundtrip() {
        for &x in &[0.1, 1.0, 2.5, 10.0, -3.0, 100.0, -50.0] {
            let e = Dd::from_f64(x).exp();
            if x > 0.0 {
                let l = e.ln();
                let err = (l.to_f64() - x).abs();
                assert!(err < 1e-28 * x.abs().max(1.0), "x={x} err={err}");
            }
            // hi part must agree with f64 exp to its own precision
            let rel = (e.to_f64() - x.exp()).abs() / x.exp();
            assert!(rel < 1e-15, "x={x} rel={rel}");
        }
    }

    #[test]
    fn exp_one_matches_reference() {
        // e = 2.718281828459045235360287471352662497757...
        let e = Dd::ONE.exp();
        let err = e.sub(Dd {
            hi: 2.718281828459045,
            lo: 1.4456468917292502e-16,
        });
        assert!(err.to_f64().abs() < 1e-30, "err={:e}", err.to_f64());
    }

    #[test]
    fn ln_matches_reference() {
        // ln 27 = 3.29583686600432907418573571076757711301...
        let l = Dd::from_f64(27.0).ln();
        let err = l.sub(Dd {
            hi: 3.295836866004329,
            lo: -5.009431212501459e-17,
        });
        assert!(err.to_f64().abs() < 1e-29, "err={:e}", err.to_f64());
    }

    #[test]
    fn div_inverts_mul() {
        let a = Dd::from_f64(3.0).recip(); // 1/3 in dd
        let b = a.mul_f64(3.0);
        assert!((b.to_f64() - 1.0).abs() < 1e-31);
        let c = Dd::PI.div(Dd::from_f64(7.0)).mul_f64(7.0).sub(Dd::PI);
        assert!(c.to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_squares_back() {
        for &x in &[2.0, 10.0, 12345.6789] {
            let s = Dd::from_f64(x).sqrt();
            let back = s.mul(s).sub(Dd::from_f64(x));
            assert!(back.to_f64().abs() < 1e-28 * x);
        }
    }
}
