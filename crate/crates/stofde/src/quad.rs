//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7/15 pair on a worst-panel-first subdivision queue. Endpoints are never
//! evaluated (all Kronrod nodes are interior), so integrable endpoint
//! singularities and 1/u-transformed tails work without guards.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod-15 abscissae (positive half) and weights; embedded Gauss-7 weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    /// Sub-interval carrying the largest error estimate.
    pub worst: (f64, f64),
}

impl Quadrature {
    pub fn converged(&self, abs_tol: f64, rel_tol: f64) -> bool {
        self.abs_error <= abs_tol.max(rel_tol * self.value.abs())
    }
}

/// One Kronrod-15 panel: returns (integral, error estimate, integral of |f|).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut result_gauss = 0.0;
    let mut result_kronrod = fc * WGK[7];
    let mut resabs = result_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    result_gauss += WG[3] * fc;

    let mean = result_kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let result = result_kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err, resabs)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on error; sequence number breaks ties deterministically.
        self.err
            .total_cmp(&other.err)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Adaptive quadrature over the chain of intervals given by `breaks`
/// (sorted, at least two entries). Refines the worst panel until the summed
/// error estimate meets `abs_tol.max(rel_tol * |value|)` or the panel budget
/// is exhausted; inspect [`Quadrature::converged`] for the outcome.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quadrature {
    assert!(breaks.len() >= 2);
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut value = 0.0;
    let mut err_sum = 0.0;
    for w in breaks.windows(2) {
        let (v, e, _) = kronrod15(&f, w[0], w[1]);
        value += v;
        err_sum += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
            seq,
        });
        seq += 1;
    }

    while err_sum > abs_tol.max(rel_tol * value.abs()) && heap.len() < max_panels {
        let worst = heap.pop().expect("heap cannot be empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Interval no longer splittable at f64 resolution.
            heap.push(worst);
            break;
        }
        let (v1, e1, _) = kronrod15(&f, worst.a, mid);
        let (v2, e2, _) = kronrod15(&f, mid, worst.b);
        value += v1 + v2 - worst.value;
        err_sum += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
            seq,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
            seq: seq + 1,
        });
        seq += 2;
    }

    let worst = heap
        .peek()
        .map(|p| (p.a, p.b))
        .unwrap_or((breaks[0], breaks[breaks.len() - 1]));
    Quadrature {
        value,
        abs_error: err_sum.max(0.0),
        panels: heap.len(),
        worst,
    }
}

/// Convenience wrapper for a single finite interval.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    adaptive(f, &[a, b], abs_tol, rel_tol, 4000)
}

/// Integral over (0, inf). The head (0, scale] is integrated directly with a
/// geometric pre-split toward 0; the tail maps through t = scale/u so that
/// algebraically decaying integrands become endpoint-singular integrable.
pub fn quad_0_inf<F: Fn(f64) -> f64>(f: F, scale: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    assert!(scale > 0.0);
    let head_breaks = [
        0.0,
        scale * 1e-6,
        scale * 1e-4,
        scale * 1e-2,
        scale * 0.1,
        scale,
    ];
    let head = adaptive(&f, &head_breaks, 0.5 * abs_tol, 0.5 * rel_tol, 4000);
    let tail = adaptive(
        |u: f64| {
            let t = scale / u;
            f(t) * t / u
        },
        &[0.0, 1e-6, 1e-3, 0.1, 1.0],
        0.5 * abs_tol,
        0.5 * rel_tol,
        4000,
    );
    Quadrature {
        value: head.value + tail.value,
        abs_error: head.abs_error + tail.abs_error,
        panels: head.panels + tail.panels,
        worst: if head.abs_error > tail.abs_error {
            head.worst
        } else {
            tail.worst
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = quad(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, 1e-12);
        assert!((q.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integral() {
        // int_0^20pi sin(x) dx = 0, int |sin| = 40
        let q = quad(|x: f64| x.sin(), 0.0, 20.0 * PI, 1e-10, 1e-10);
        assert!(q.value.abs() < 1e-9);
        let q2 = quad(|x: f64| x.sin().abs(), 0.0, 20.0 * PI, 1e-9, 1e-9);
        assert!((q2.value - 40.0).abs() < 1e-7);
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let q = quad(|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-10, 1e-10);
        assert!((q.value - 2.0).abs() < 1e-8, "value={}", q.value);
    }

    #[test]
    fn lorentzian_on_half_line() {
        // int_0^inf dx/(1+x^2) = pi/2
        let q = quad_0_inf(|x| 1.0 / (1.0 + x * x), 1.0, 1e-11, 1e-11);
        assert!((q.value - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn quartic_tail_on_half_line() {
        // int_0^inf dx/(1+x^4) = pi/(2 sqrt 2)
        let q = quad_0_inf(|x: f64| 1.0 / (1.0 + x.powi(4)), 1.0, 1e-11, 1e-11);
        assert!((q.value - PI / (2.0 * 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn reports_nonconvergence_honestly() {
        // Interior singularity that a budget of 8 panels cannot resolve.
        let q = adaptive(
            |x: f64| (x - 0.3).abs().powf(-0.5),
            &[0.0, 1.0],
            1e-12,
            1e-12,
            8,
        );
        assert!(!q.converged(1e-12, 1e-12));
    }
}
