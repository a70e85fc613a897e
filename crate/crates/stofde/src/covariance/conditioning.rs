//! Conditional variance of the stationary-increment field given finitely
//! many observations: the Schur complement Var(U(p)) - k K^{-1} k^T with all
//! entries assembled from the variogram, solved through a jittered Cholesky.

use super::variogram::SpaceTimePoint;
use super::CovarianceError;

/// In-place lower Cholesky for small dense systems; `None` when a pivot
/// fails.
fn cholesky_small(a: &mut [f64], n: usize) -> Option<()> {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    Some(())
}

fn solve_with_factor(l: &[f64], n: usize, b: &mut [f64]) {
    // forward then backward substitution for L L^T x = b
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Var(U(target) | U at `conditioners`), entries supplied by `cov`.
/// A ridge of 1e-10 trace/n is added once and escalated tenfold at most
/// three times before the solve is declared singular. Tiny negative Schur
/// values from roundoff clamp to zero.
pub fn conditional_variance<F>(
    target: &SpaceTimePoint,
    conditioners: &[SpaceTimePoint],
    cov: &F,
) -> Result<f64, CovarianceError>
where
    F: Fn(&SpaceTimePoint, &SpaceTimePoint) -> Result<f64, CovarianceError>,
{
    let v0 = cov(target, target)?;
    let n = conditioners.len();
    if n == 0 {
        return Ok(v0);
    }
    let mut kmat = vec![0.0f64; n * n];
    let mut kvec = vec![0.0f64; n];
    for i in 0..n {
        kvec[i] = cov(target, &conditioners[i])?;
        for j in 0..=i {
            let c = cov(&conditioners[i], &conditioners[j])?;
            kmat[i * n + j] = c;
            kmat[j * n + i] = c;
        }
    }
    let trace: f64 = (0..n).map(|i| kmat[i * n + i]).sum();
    let mut ridge = 1e-10 * trace.max(1e-300) / n as f64;
    for _attempt in 0..4 {
        let mut a = kmat.clone();
        for i in 0..n {
            a[i * n + i] += ridge;
        }
        if cholesky_small(&mut a, n).is_some() {
            let mut x = kvec.clone();
            solve_with_factor(&a, n, &mut x);
            let reduction: f64 = kvec.iter().zip(&x).map(|(k, xi)| k * xi).sum();
            return Ok((v0 - reduction).max(0.0));
        }
        ridge *= 10.0;
    }
    Err(CovarianceError::SingularConditioning)
}
