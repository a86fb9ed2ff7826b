//! The body height function `u = (u*)*` with `u* = max(|p|, v(p₁))`.

use crate::error::{Error, Result};
use crate::extremal::ExtremalSolution;
use crate::functional::HeightField;
use crate::numerics::golden_max;

use super::conjugate::extended_v;

/// Tolerance of the outer search over `p₁`.
const P1_TOL: f64 = 1e-11;
const MAX_ITER: usize = 200;

/// Evaluates `u(x) = sup_p (⟨p, x⟩ − max(|p|, v(p₁)))` on the closed disk.
///
/// The inner supremum over `p₂` is explicit; the remaining concave function
/// of `p₁` is maximized by golden section on `[−p₀, p₀]`.
#[derive(Debug, Clone, Copy)]
pub struct BodyEvaluator<'a> {
    sol: &'a ExtremalSolution,
}

impl<'a> BodyEvaluator<'a> {
    pub fn new(sol: &'a ExtremalSolution) -> Self {
        Self { sol }
    }

    pub fn solution(&self) -> &ExtremalSolution {
        self.sol
    }

    /// `sup_{p₂} (p₂ x₂ − max(√(p₁² + p₂²), v(p₁)))`.
    fn inner(&self, p1: f64, x2: f64) -> Result<f64> {
        let a = p1.abs();
        let v = extended_v(self.sol, a)?;
        let s = (v * v - a * a).max(0.0).sqrt();
        let c = (1.0 - x2 * x2).max(0.0).sqrt();
        // the unconstrained maximizer of p₂x₂ − |p| has |p₂| = |x₂||p₁|/c
        if x2.abs() * a >= s * c {
            Ok(-a * c)
        } else {
            Ok(s * x2.abs() - v)
        }
    }

    pub fn evaluate(&self, x1: f64, x2: f64) -> Result<f64> {
        let rr = x1 * x1 + x2 * x2;
        if !(rr <= 1.0 + 1e-12) {
            return Err(Error::Domain(format!("({x1}, {x2}) is outside the unit disk")));
        }
        let mut failure = None;
        let mut objective = |p1: f64| match self.inner(p1, x2) {
            Ok(psi) => p1 * x1 + psi,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        };
        // v(|p₁|) has a corner at p₁ = 0; each half is smooth
        let tol = P1_TOL * self.sol.p0;
        let (_, left) = golden_max(&mut objective, -self.sol.p0, 0.0, tol, MAX_ITER);
        let (_, right) = golden_max(&mut objective, 0.0, self.sol.p0, tol, MAX_ITER);
        let value = left.max(right);
        if let Some(e) = failure {
            return Err(Error::Evaluation(format!("u({x1}, {x2}): {e}")));
        }
        if !value.is_finite() {
            return Err(Error::Evaluation(format!("u({x1}, {x2}) is not finite")));
        }
        // u ≤ 0 holds exactly; roundoff can leave a tiny positive value
        Ok(value.min(0.0))
    }
}

impl HeightField for BodyEvaluator<'_> {
    fn height(&self, x1: f64, x2: f64) -> Result<f64> {
        self.evaluate(x1, x2)
    }
}
