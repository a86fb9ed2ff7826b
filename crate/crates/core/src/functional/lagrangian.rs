//! The integrand
//! `f(p, v, v') = 2√(v²−p²) v'²/(v²+c)² − (pv'−v)/(v(v²+c)√(v²−p²))`
//! and its closed-form partial derivatives. `c = 1` is the physical problem,
//! `c = α` its scaled form.
//!
//! Near the right end `v ≈ p`, `v' ≈ 1` both `v − p` and `v' − 1` are tiny, so
//! the point keeps them as separate fields and every formula is written in
//! terms of the gaps.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianPoint {
    pub p: f64,
    pub v: f64,
    pub vp: f64,
    /// `v − p`, carried separately to avoid cancellation.
    pub gap: f64,
    /// `v' − 1`.
    pub dgap: f64,
    /// The constant in `v² + c`.
    pub c: f64,
    /// `v''`, only needed for the endpoint limit at `v = p`.
    pub vpp: Option<f64>,
}

impl LagrangianPoint {
    /// Point of the physical problem (`c = 1`).
    pub fn new(p: f64, v: f64, vp: f64) -> Self {
        Self::with_c(p, v, vp, 1.0)
    }

    /// Point of the scaled problem `g(q, η, η')` with `c = α`.
    pub fn scaled(q: f64, eta: f64, etap: f64, alpha: f64) -> Self {
        Self::with_c(q, eta, etap, alpha)
    }

    pub fn with_c(p: f64, v: f64, vp: f64, c: f64) -> Self {
        Self {
            p,
            v,
            vp,
            gap: v - p,
            dgap: vp - 1.0,
            c,
            vpp: None,
        }
    }

    /// Builds the point from the gaps `v − p` and `v' − 1` directly.
    pub fn from_gaps(p: f64, gap: f64, dgap: f64, c: f64) -> Self {
        Self {
            p,
            v: p + gap,
            vp: 1.0 + dgap,
            gap,
            dgap,
            c,
            vpp: None,
        }
    }

    pub fn with_vpp(mut self, vpp: f64) -> Self {
        self.vpp = Some(vpp);
        self
    }

    fn d(&self) -> f64 {
        self.v * self.v + self.c
    }

    /// `√(v² − p²)` as `√(gap (gap + 2p))`.
    fn s(&self) -> f64 {
        (self.gap * (self.gap + 2.0 * self.p)).sqrt()
    }

    /// `pv' − v` as `p·dgap − gap`.
    fn t(&self) -> f64 {
        self.p * self.dgap - self.gap
    }

    fn check_interior(&self) -> Result<()> {
        if !(self.gap > 0.0) || !(self.v > 0.0) || self.p < 0.0 {
            return Err(Error::Domain(format!(
                "need v > p >= 0, got p = {}, v = {}",
                self.p, self.v
            )));
        }
        Ok(())
    }
}

/// Value of `f` at the right end `v = p`, `v' = 1`: `√(p v'')/(p (p² + c))`.
pub fn endpoint_limit(p: f64, vpp: f64, c: f64) -> f64 {
    (p * vpp).sqrt() / (p * (p * p + c))
}

pub fn f_eval(pt: &LagrangianPoint) -> Result<f64> {
    if pt.gap == 0.0 && pt.dgap == 0.0 {
        if let Some(vpp) = pt.vpp {
            if vpp > 0.0 && pt.p > 0.0 {
                return Ok(endpoint_limit(pt.p, vpp, pt.c));
            }
        }
    }
    pt.check_interior()?;
    let s = pt.s();
    let d = pt.d();
    Ok(2.0 * s * pt.vp * pt.vp / (d * d) - pt.t() / (pt.v * d * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partial {
    /// `f_v`
    V,
    /// `f_{v'}`
    Vp,
    /// `f_{pv'}`
    PVp,
    /// `f_{vv'}`
    VVp,
    /// `f_{v'v'}`
    VpVp,
}

/// Closed-form partial derivatives of `f`.
pub fn pmp_derivatives(pt: &LagrangianPoint, which: Partial) -> Result<f64> {
    pt.check_interior()?;
    let (p, v, w) = (pt.p, pt.v, pt.vp);
    let s = pt.s();
    let d = pt.d();
    let r = v * d * s;
    // ∂ ln(v D S)/∂v
    let log_r_v = 1.0 / v + 2.0 * v / d + v / (s * s);
    Ok(match which {
        Partial::V => {
            2.0 * w * w * v / (s * d * d) - 8.0 * s * w * w * v / (d * d * d)
                + 1.0 / r
                + pt.t() / r * log_r_v
        }
        Partial::Vp => 4.0 * s * w / (d * d) - p / r,
        Partial::PVp => -4.0 * p * w / (s * d * d) - v / (d * s * s * s),
        Partial::VVp => {
            4.0 * w * v / (s * d * d) - 16.0 * s * w * v / (d * d * d) + p / r * log_r_v
        }
        Partial::VpVp => 4.0 * s / (d * d),
    })
}

/// `f_v − f_{pv'} − v' f_{vv'}`, the part of the Euler–Lagrange equation that
/// does not involve `v''`.
pub fn euler_lagrange_defect(pt: &LagrangianPoint) -> Result<f64> {
    Ok(pmp_derivatives(pt, Partial::V)?
        - pmp_derivatives(pt, Partial::PVp)?
        - pt.vp * pmp_derivatives(pt, Partial::VVp)?)
}

/// `v''` on a singular arc: `(f_v − f_{pv'} − v' f_{vv'}) / f_{v'v'}`.
pub fn singular_arc_accel(pt: &LagrangianPoint) -> Result<f64> {
    Ok(euler_lagrange_defect(pt)? / pmp_derivatives(pt, Partial::VpVp)?)
}

/// Right-hand side of the singular-arc equation in explicit form,
/// `−¼(v'−1)²/(v−p) − ¼(v'+1)²/(v+p) + 2vv'²/(v²+c)`.
pub fn singular_arc_rhs(pt: &LagrangianPoint) -> f64 {
    let (p, v, w) = (pt.p, pt.v, pt.vp);
    -0.25 * pt.dgap * pt.dgap / pt.gap - 0.25 * (w + 1.0) * (w + 1.0) / (v + p)
        + 2.0 * v * w * w / (v * v + pt.c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn hand_values() {
        assert_eq!(f_eval(&LagrangianPoint::new(0.0, 1.0, 0.0)).unwrap(), 0.5);
        assert_eq!(f_eval(&LagrangianPoint::new(0.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(f_eval(&LagrangianPoint::scaled(0.0, 1.0, 0.0, 0.0)).unwrap(), 1.0);
        assert_eq!(f_eval(&LagrangianPoint::scaled(0.0, 1.0, 1.0, 0.0)).unwrap(), 3.0);
        let fww = pmp_derivatives(&LagrangianPoint::new(0.0, 1.0, 0.3), Partial::VpVp).unwrap();
        assert_eq!(fww, 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(f_eval(&LagrangianPoint::new(1.0, 0.5, 1.0)).is_err());
        assert!(f_eval(&LagrangianPoint::new(1.0, 1.0, 0.7)).is_err());
        assert!(f_eval(&LagrangianPoint::new(1.0, 1.0, 1.0)).is_err());
        assert!(pmp_derivatives(&LagrangianPoint::new(1.0, 1.0, 1.0), Partial::V).is_err());
    }

    #[test]
    fn endpoint_limit_matches_nearby_values() {
        // v − p ≈ ½v''s², v' − 1 ≈ −v''s approaching p0 = 2 from the left
        let (p0, vpp) = (2.0, 0.4);
        let lim = f_eval(&LagrangianPoint::from_gaps(p0, 0.0, 0.0, 1.0).with_vpp(vpp)).unwrap();
        assert_eq!(lim, endpoint_limit(p0, vpp, 1.0));
        let s: f64 = 1e-6;
        let near = LagrangianPoint::from_gaps(p0 - s, 0.5 * vpp * s * s, -vpp * s, 1.0);
        assert!(close(f_eval(&near).unwrap(), lim, 1e-5));
    }

    #[test]
    fn partials_match_finite_differences() {
        let h = 1e-6;
        let pts = [
            (0.3, 0.9, 0.6, 1.0),
            (1.2, 1.5, 0.8, 1.0),
            (0.2, 0.35, 0.55, 0.0),
            (0.5, 0.7, 1.3, 0.05),
        ];
        for &(p, v, w, c) in &pts {
            let f = |p: f64, v: f64, w: f64| f_eval(&LagrangianPoint::with_c(p, v, w, c)).unwrap();
            let pt = LagrangianPoint::with_c(p, v, w, c);
            let fv = (f(p, v + h, w) - f(p, v - h, w)) / (2.0 * h);
            let fw_fd = (f(p, v, w + h) - f(p, v, w - h)) / (2.0 * h);
            // second partials differentiate the closed-form f_{v'} once more
            let fw = |p: f64, v: f64, w: f64| {
                pmp_derivatives(&LagrangianPoint::with_c(p, v, w, c), Partial::Vp).unwrap()
            };
            let fww = (fw(p, v, w + h) - fw(p, v, w - h)) / (2.0 * h);
            let fpw = (fw(p + h, v, w) - fw(p - h, v, w)) / (2.0 * h);
            let fvw = (fw(p, v + h, w) - fw(p, v - h, w)) / (2.0 * h);
            let tol = 1e-5;
            assert!(close(pmp_derivatives(&pt, Partial::V).unwrap(), fv, tol));
            assert!(close(pmp_derivatives(&pt, Partial::Vp).unwrap(), fw_fd, tol));
            assert!(close(pmp_derivatives(&pt, Partial::VpVp).unwrap(), fww, tol));
            assert!(close(pmp_derivatives(&pt, Partial::PVp).unwrap(), fpw, tol));
            assert!(close(pmp_derivatives(&pt, Partial::VVp).unwrap(), fvw, tol));
        }
    }

    #[test]
    fn euler_lagrange_is_the_singular_arc_equation() {
        for &(p, v, w, c) in &[(0.3, 0.9, 0.6, 1.0), (1.2, 1.5, 0.8, 1.0), (0.4, 0.5, 0.9, 0.1)] {
            let pt = LagrangianPoint::with_c(p, v, w, c);
            let a = singular_arc_accel(&pt).unwrap();
            assert!(close(a, singular_arc_rhs(&pt), 1e-12), "{a} vs {}", singular_arc_rhs(&pt));
        }
    }

    #[test]
    fn legendre_condition_holds_inside() {
        for &(p, v, w) in &[(0.1, 0.2, 0.5), (2.0, 2.5, 1.0), (0.0, 0.3, 0.0)] {
            assert!(pmp_derivatives(&LagrangianPoint::new(p, v, w), Partial::VpVp).unwrap() > 0.0);
        }
    }
}
