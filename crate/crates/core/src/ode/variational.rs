//! Linear equations `ÿ = 4λ(tẏ - y)/t² + α(t) y/t + β(t) ẏ + σ(t)` with
//! `y(0) = 0`, the shape taken by variational (Jacobi) equations along
//! solutions of the singular IVP.

use super::dense::{DenseSolution, State};
use super::rk::{integrate_second_order, StepControl};
use crate::error::{Error, Result};

type CoeffFn<'a> = Box<dyn Fn(f64) -> f64 + 'a>;

/// Coefficients `α, β, σ` (each C¹ including `t = 0`) and `λ ∈ (-1/2, 0)`.
pub struct VariationalCoeffs<'a> {
    lambda: f64,
    alpha_fn: CoeffFn<'a>,
    beta_fn: CoeffFn<'a>,
    sigma_fn: CoeffFn<'a>,
}

impl<'a> VariationalCoeffs<'a> {
    pub fn new(
        lambda: f64,
        alpha_fn: impl Fn(f64) -> f64 + 'a,
        beta_fn: impl Fn(f64) -> f64 + 'a,
        sigma_fn: impl Fn(f64) -> f64 + 'a,
    ) -> Result<Self> {
        if !(lambda > -0.5 && lambda < 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda = {lambda} must satisfy -1/2 < lambda < 0"
            )));
        }
        Ok(Self {
            lambda,
            alpha_fn: Box::new(alpha_fn),
            beta_fn: Box::new(beta_fn),
            sigma_fn: Box::new(sigma_fn),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn alpha(&self, t: f64) -> f64 {
        (self.alpha_fn)(t)
    }
    pub fn beta(&self, t: f64) -> f64 {
        (self.beta_fn)(t)
    }
    pub fn sigma(&self, t: f64) -> f64 {
        (self.sigma_fn)(t)
    }

    /// Right-hand side for `t ≠ 0`.
    pub fn rhs(&self, t: f64, y: f64, yd: f64) -> f64 {
        4.0 * self.lambda * (t * yd - y) / (t * t)
            + self.alpha(t) * y / t
            + self.beta(t) * yd
            + self.sigma(t)
    }
}

/// `ÿ(0) = ((α(0) + β(0)) ẏ₀ + σ(0)) / (1 - 2λ)`.
pub fn variational_accel_at_origin(coeffs: &VariationalCoeffs<'_>, ydot0: f64) -> f64 {
    ((coeffs.alpha(0.0) + coeffs.beta(0.0)) * ydot0 + coeffs.sigma(0.0))
        / (1.0 - 2.0 * coeffs.lambda())
}

/// Solves from `t = 0` to `t_end` with `y(0) = 0`, `ẏ(0) = ydot0`.
///
/// The solution is a quadratic Taylor polynomial on `|t| ≤ √tol` (clamped to
/// `[1e-7, 1e-3]`) and adaptive Dormand–Prince stepping beyond.
pub fn integrate_variational(
    coeffs: &VariationalCoeffs<'_>,
    ydot0: f64,
    t_end: f64,
    tol: f64,
) -> Result<DenseSolution> {
    if t_end == 0.0 || !t_end.is_finite() {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be nonzero")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol = {tol} must be positive")));
    }
    let dir = t_end.signum();
    let acc0 = variational_accel_at_origin(coeffs, ydot0);
    let tau = tol.sqrt().clamp(1e-7, 1e-3).min(t_end.abs());
    let origin = State {
        t: 0.0,
        x: 0.0,
        xd: ydot0,
        xdd: acc0,
    };
    let ts = dir * tau;
    let handoff_raw = State {
        t: ts,
        x: ydot0 * ts + 0.5 * acc0 * ts * ts,
        xd: ydot0 + acc0 * ts,
        xdd: acc0,
    };
    let seed = DenseSolution::from_states(&[origin, handoff_raw]);
    if tau >= t_end.abs() {
        return Ok(seed);
    }
    // the stepper needs the true acceleration at the handoff point
    let handoff = State {
        xdd: coeffs.rhs(ts, handoff_raw.x, handoff_raw.xd),
        ..handoff_raw
    };
    let ctl = StepControl {
        tol,
        atol: tol,
        h_max: 0.05,
        h_init: 0.25 * tau,
    };
    let states = integrate_second_order(
        |t, y, yd| coeffs.rhs(t, y, yd),
        handoff,
        t_end,
        ctl,
        |s| {
            if s.x.is_finite() && s.xd.is_finite() {
                Ok(())
            } else {
                Err(Error::BlowUp {
                    t: s.t,
                    reason: "non-finite variational state".into(),
                })
            }
        },
    )?;
    let stepped = DenseSolution::from_states(&states);
    Ok(if dir > 0.0 {
        DenseSolution::concat(seed, stepped)
    } else {
        DenseSolution::concat(stepped, seed)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero<'a>(lambda: f64) -> VariationalCoeffs<'a> {
        VariationalCoeffs::new(lambda, |_| 0.0, |_| 0.0, |_| 0.0).unwrap()
    }

    #[test]
    fn lambda_range_is_enforced() {
        assert!(VariationalCoeffs::new(0.0, |_| 0.0, |_| 0.0, |_| 0.0).is_err());
        assert!(VariationalCoeffs::new(-0.5, |_| 0.0, |_| 0.0, |_| 0.0).is_err());
        assert!(VariationalCoeffs::new(-0.49, |_| 0.0, |_| 0.0, |_| 0.0).is_ok());
    }

    #[test]
    fn accel_at_origin_examples() {
        assert_eq!(variational_accel_at_origin(&zero(-0.25), 1.0), 0.0);
        let c = VariationalCoeffs::new(-0.25, |_| 3.0, |_| 0.0, |_| 0.0).unwrap();
        assert_eq!(variational_accel_at_origin(&c, 1.0), 2.0);
        let c = VariationalCoeffs::new(-0.25, |_| 0.0, |_| 0.0, |_| 1.5).unwrap();
        assert_eq!(variational_accel_at_origin(&c, 0.0), 1.0);
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let c = VariationalCoeffs::new(-0.25, |t| 1.0 + t, |t| t.sin(), |_| 0.0).unwrap();
        let y = integrate_variational(&c, 0.0, -1.0, 1e-10).unwrap();
        for s in y.samples(50) {
            assert_eq!(s.x, 0.0);
        }
    }

    #[test]
    fn linear_functions_are_annihilated() {
        let y = integrate_variational(&zero(-0.25), 1.0, 2.0, 1e-10).unwrap();
        for s in y.samples(40) {
            assert!((s.x - s.t).abs() < 1e-12, "{s:?}");
            assert!((s.xd - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_sigma_quadratic_solution() {
        // σ ≡ 3/2, λ = -1/4: y = t²/2 solves ÿ = -(tẏ - y)/t² + 3/2
        let c = VariationalCoeffs::new(-0.25, |_| 0.0, |_| 0.0, |_| 1.5).unwrap();
        let y = integrate_variational(&c, 0.0, -1.0, 1e-10).unwrap();
        for s in y.samples(30) {
            assert!((s.x - 0.5 * s.t * s.t).abs() < 1e-9, "{s:?}");
        }
    }
}
