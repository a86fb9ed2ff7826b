//! The singular-arc equation
//! `v'' = −¼(v'−1)²/(v−p) − ¼(v'+1)²/(v+p) + 2vv'²/(v²+c)`
//! written as a singular IVP around its right end `p = a`, `v(a) = a`,
//! `v'(a) = 1`.
//!
//! With `t = p − a` and `x = v − p` the equation becomes
//! `ẍ = −¼ẋ²/x + g(t, x, ẋ)`. The scaled problem (`ν(q)` with `ν(1) = ν'(1) = 1`)
//! is `a = 1`, `c = α`; the physical one (`v(p)` on `[0, p₀]`) is `a = p₀`,
//! `c = 1`.

use crate::error::{Error, Result};
use crate::functional::lagrangian::{f_eval, LagrangianPoint};
use crate::ode::{integrate, DenseSolution, Forcing, SingularIVP};

pub const NEWTON_LAMBDA: f64 = -0.25;

#[derive(Debug, Clone, Copy)]
pub struct NewtonForcing {
    anchor: f64,
    c: f64,
}

impl NewtonForcing {
    pub fn new(anchor: f64, c: f64) -> Self {
        Self { anchor, c }
    }

    /// `(W, P, Q, D)` with `W = v'`, `P = v + p`, `Q = v`, `D = v² + c`.
    fn parts(&self, t: f64, x: f64, xd: f64) -> (f64, f64, f64, f64) {
        let w = xd + 1.0;
        let q = x + t + self.anchor;
        let p = q + t + self.anchor;
        (w, p, q, q * q + self.c)
    }
}

impl Forcing for NewtonForcing {
    fn g(&self, t: f64, x: f64, xd: f64) -> f64 {
        let (w, p, q, d) = self.parts(t, x, xd);
        -0.25 * (w + 1.0) * (w + 1.0) / p + 2.0 * q * w * w / d
    }

    fn g_x(&self, t: f64, x: f64, xd: f64) -> f64 {
        let (w, p, q, d) = self.parts(t, x, xd);
        0.25 * (w + 1.0) * (w + 1.0) / (p * p) + 2.0 * w * w * (self.c - q * q) / (d * d)
    }

    fn g_xdot(&self, t: f64, x: f64, xd: f64) -> f64 {
        let (w, p, q, d) = self.parts(t, x, xd);
        -0.5 * (w + 1.0) / p + 4.0 * q * w / d
    }

    fn g_t(&self, t: f64, x: f64, xd: f64) -> f64 {
        let (w, p, q, d) = self.parts(t, x, xd);
        0.5 * (w + 1.0) * (w + 1.0) / (p * p) + 2.0 * w * w * (self.c - q * q) / (d * d)
    }
}

/// `[ν(1), ν'(1), ν''(1), ν'''(1)]` truncated to `order + 1` entries.
pub fn nu_derivatives_at_one(alpha: f64, order: usize) -> Vec<f64> {
    let all = [
        1.0,
        1.0,
        (3.0 - alpha) / (3.0 * (1.0 + alpha)),
        (3.0 + 2.0 * alpha + alpha * alpha) / (2.0 * (1.0 + alpha) * (1.0 + alpha)),
    ];
    all[..=order.min(3)].to_vec()
}

/// `v''(p₀) = (3p₀² − 1)/(3p₀(1 + p₀²))`.
pub fn v_second_at_end(p0: f64) -> f64 {
    (3.0 * p0 * p0 - 1.0) / (3.0 * p0 * (1.0 + p0 * p0))
}

/// `v'''(p₀) = (3p₀⁴ + 2p₀² + 1)/(2p₀²(1 + p₀²)²)`.
pub fn v_third_at_end(p0: f64) -> f64 {
    let s = p0 * p0;
    (3.0 * s * s + 2.0 * s + 1.0) / (2.0 * s * (1.0 + s) * (1.0 + s))
}

/// A point of a singular arc with the gaps kept separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPoint {
    pub p: f64,
    pub v: f64,
    pub vp: f64,
    pub vpp: f64,
    /// `v − p`
    pub gap: f64,
    /// `v' − 1`
    pub dgap: f64,
}

/// Solution of the singular-arc equation from its right end down to `p_min`.
#[derive(Debug, Clone)]
pub struct SingularArc {
    anchor: f64,
    c: f64,
    sol: DenseSolution,
}

impl SingularArc {
    /// Integrates from `p = anchor` down to `p_min`.
    pub fn solve(anchor: f64, c: f64, p_min: f64, tol: f64) -> Result<Self> {
        if !(anchor > 0.0) || !(c >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "need anchor > 0 and c >= 0, got {anchor}, {c}"
            )));
        }
        if !(p_min < anchor) {
            return Err(Error::InvalidInput(format!(
                "p_min = {p_min} must be below the right end {anchor}"
            )));
        }
        let ivp = SingularIVP::new(NEWTON_LAMBDA, NewtonForcing::new(anchor, c))?;
        let sol = integrate(&ivp, p_min - anchor, tol)?;
        Ok(Self { anchor, c, sol })
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Underlying solution in `t = p − anchor`, `x = v − p`.
    pub fn dense(&self) -> &DenseSolution {
        &self.sol
    }

    /// `[p_min, anchor]`
    pub fn domain(&self) -> (f64, f64) {
        let (lo, hi) = self.sol.domain();
        (lo + self.anchor, hi + self.anchor)
    }

    pub fn eval(&self, p: f64) -> Result<ArcPoint> {
        let t = self.t_of(p);
        let s = self.sol.eval(t)?;
        Ok(ArcPoint {
            p,
            v: s.x + p,
            vp: s.xd + 1.0,
            vpp: s.xdd,
            gap: s.x,
            dgap: s.xd,
        })
    }

    pub fn third_derivative(&self, p: f64) -> Result<f64> {
        self.sol.third_derivative(self.t_of(p))
    }

    fn t_of(&self, p: f64) -> f64 {
        // rounding in p = p₀q can land a few ulps past the right end
        if (p - self.anchor).abs() <= 4.0 * f64::EPSILON * self.anchor {
            0.0
        } else {
            p - self.anchor
        }
    }

    /// The integrand `f` with `v² + c` on this arc, using the finite limit at
    /// the right end.
    pub fn lagrangian(&self, p: f64) -> Result<f64> {
        let a = self.eval(p)?;
        f_eval(&LagrangianPoint::from_gaps(p, a.gap, a.dgap, self.c).with_vpp(a.vpp))
    }

    /// Finds `p` with `v'(p) = slope` on `[lo, hi]` (v' is increasing on a
    /// convex arc).
    pub fn solve_slope(&self, slope: f64, lo: f64, hi: f64) -> Result<f64> {
        crate::numerics::brent(
            |p| Ok(self.eval(p)?.dgap - (slope - 1.0)),
            lo,
            hi,
            crate::numerics::RootTol::default(),
        )
    }
}

/// `ν(q, α)` on `[0, 1]`, integrated backward from `q = 1`.
pub fn solve_nu(alpha: f64, tol: f64) -> Result<SingularArc> {
    solve_nu_to(alpha, 0.0, tol)
}

pub fn solve_nu_to(alpha: f64, q_min: f64, tol: f64) -> Result<SingularArc> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be >= 0")));
    }
    SingularArc::solve(1.0, alpha, q_min, tol)
}

/// `v(p; p₀)` of the physical problem on `[0, p₀]`.
pub fn solve_v(p0: f64, tol: f64) -> Result<SingularArc> {
    SingularArc::solve(p0, 1.0, 0.0, tol)
}

/// `g(q, η, η') = 2√(η²−q²)η'²/(η²+α)² − (qη'−η)/(η(η²+α)√(η²−q²))`.
pub fn scaled_lagrangian(q: f64, eta: f64, etap: f64, alpha: f64) -> Result<f64> {
    f_eval(&LagrangianPoint::scaled(q, eta, etap, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::DEFAULT_TOL;

    #[test]
    fn derivative_formulas() {
        assert_eq!(nu_derivatives_at_one(0.0, 3), vec![1.0, 1.0, 1.0, 1.5]);
        let d = nu_derivatives_at_one(1.0, 3);
        assert!((d[2] - 1.0 / 3.0).abs() < 1e-15 && (d[3] - 0.75).abs() < 1e-15);
        assert_eq!(nu_derivatives_at_one(3.0, 2)[2], 0.0);
        assert_eq!(nu_derivatives_at_one(0.2, 1).len(), 2);
    }

    #[test]
    fn forcing_partials_match_differences() {
        let f = NewtonForcing::new(1.0, 0.1);
        let h = 1e-6;
        for &(t, x, xd) in &[(-0.3, 0.05, -0.2), (-0.8, 0.2, -0.45), (-0.01, 1e-4, -0.01)] {
            let gx = (f.g(t, x + h, xd) - f.g(t, x - h, xd)) / (2.0 * h);
            let gd = (f.g(t, x, xd + h) - f.g(t, x, xd - h)) / (2.0 * h);
            let gt = (f.g(t + h, x, xd) - f.g(t - h, x, xd)) / (2.0 * h);
            assert!((f.g_x(t, x, xd) - gx).abs() < 1e-7);
            assert!((f.g_xdot(t, x, xd) - gd).abs() < 1e-7);
            assert!((f.g_t(t, x, xd) - gt).abs() < 1e-7);
        }
    }

    #[test]
    fn forcing_at_origin() {
        for alpha in [0.0, 0.1, 1.0] {
            let ivp = SingularIVP::new(NEWTON_LAMBDA, NewtonForcing::new(1.0, alpha)).unwrap();
            assert!((ivp.accel_at_origin() - nu_derivatives_at_one(alpha, 2)[2]).abs() < 1e-15);
        }
        for p0 in [1.0, 2.0, 7.5] {
            let ivp = SingularIVP::new(NEWTON_LAMBDA, NewtonForcing::new(p0, 1.0)).unwrap();
            assert!((ivp.accel_at_origin() - v_second_at_end(p0)).abs() < 1e-15);
        }
        assert!((v_second_at_end(1.0) - 1.0 / 3.0).abs() < 1e-15);
        // g(0,0,0) vanishes at p0 = 1/√3
        let g = NewtonForcing::new(1.0 / 3f64.sqrt(), 1.0).g(0.0, 0.0, 0.0);
        assert!(g.abs() < 1e-15);
    }

    #[test]
    fn initial_conditions_hold() {
        let nu = solve_nu(0.05, DEFAULT_TOL).unwrap();
        assert_eq!(nu.domain(), (0.0, 1.0));
        let a = nu.eval(1.0).unwrap();
        assert_eq!((a.v, a.vp), (1.0, 1.0));
        assert!((a.vpp - nu_derivatives_at_one(0.05, 2)[2]).abs() < 1e-10);
    }

    #[test]
    fn limit_solution_values() {
        let nu = solve_nu(0.0, DEFAULT_TOL).unwrap();
        let a = nu.eval(0.0).unwrap();
        assert!((a.v - 0.3157595).abs() < 1e-6, "{}", a.v);
        assert!((a.vp - 0.5350553).abs() < 1e-6, "{}", a.vp);
    }

    #[test]
    fn scaled_lagrangian_hand_values() {
        assert_eq!(scaled_lagrangian(0.0, 1.0, 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(scaled_lagrangian(0.0, 1.0, 1.0, 0.0).unwrap(), 3.0);
        assert!(matches!(scaled_lagrangian(0.5, 0.5, 0.3, 0.0), Err(Error::Domain(_))));
    }
}
