//! Scalar root finding and one-dimensional maximization.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootTol {
    /// Absolute width of the final bracket.
    pub x_tol: f64,
    /// Stop early once `|f| <= f_tol`.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootTol {
    fn default() -> Self {
        Self {
            x_tol: 1e-14,
            f_tol: 0.0,
            max_iter: 200,
        }
    }
}

/// Brent's method: bisection safeguarded inverse-quadratic/secant steps on a
/// sign-changing bracket `[a, b]`.
pub fn brent<F>(mut f: F, a: f64, b: f64, tol: RootTol) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot(format!(
            "no sign change on [{a}, {b}] (f = {fa:.3e}, {fb:.3e})"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.x_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || fb.abs() <= tol.f_tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b)?;
    }
    Err(Error::NoRoot(format!(
        "Brent iteration did not converge in {} steps",
        tol.max_iter
    )))
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F>(mut f: F, a: f64, b: f64, x_tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= x_tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    // the endpoints matter for functions maximal at the boundary
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, RootTol::default()).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        let r = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, RootTol::default());
        assert!(matches!(r, Err(Error::NoRoot(_))));
    }

    #[test]
    fn golden_handles_interior_and_boundary() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-12, 200);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
        let (x, _) = golden_max(|x| x, -1.0, 2.0, 1e-12, 200);
        assert_eq!(x, 2.0);
        // kinked concave
        let (x, v) = golden_max(|x| -(x - 0.25).abs(), -1.0, 1.0, 1e-13, 200);
        assert!((x - 0.25).abs() < 1e-12);
        assert!(v.abs() < 1e-12);
    }
}
