//! The resistance functional `J(v) = ∫₀^{p₀} f(p, v, v') dp` along an
//! assembled extremal, in scaled and physical coordinates, and its form
//! before integration by parts.

use crate::error::Result;
use crate::extremal::profile::{ExtremalSolution, ScaledProfile};
use crate::numerics::{integrate, QuadTol};

use super::lagrangian::f_eval;

/// `∫₀¹ g(q, κ, κ') dq`; the physical `J` is `α` times this.
pub fn j_scaled(profile: &ScaledProfile) -> Result<f64> {
    let tol = QuadTol::default();
    let lin = integrate(
        |q| f_eval(&profile.affine().point(q)),
        0.0,
        profile.rho,
        tol,
    )?;
    let arc = integrate(|q| profile.nu.lagrangian(q), profile.rho, 1.0, tol)?;
    Ok(lin.value + arc.value)
}

/// `∫₀^{p₀} f(p, v, v') dp` evaluated on the physical curve.
pub fn j_unscaled(sol: &ExtremalSolution) -> Result<f64> {
    let tol = QuadTol::default();
    let f = |p: f64| f_eval(&sol.lagrangian_point(p)?);
    let lin = integrate(f, 0.0, sol.r, tol)?;
    let arc = integrate(f, sol.r, sol.p0, tol)?;
    Ok(lin.value + arc.value)
}

/// Integrand of the measure form
/// `h (−(pv'−v)/(√(v²−p²) v) + k')` with `h = 1/(1+v²)`, `k = v'√(v²−p²)/v`.
///
/// Arguments are `p`, `v − p`, `v' − 1` and `v''`.
pub fn gamma_integrand(p: f64, gap: f64, dgap: f64, vpp: f64) -> f64 {
    let v = p + gap;
    let w = 1.0 + dgap;
    let s = (gap * (gap + 2.0 * p)).sqrt();
    let t = p * dgap - gap;
    // v v' − p
    let u = gap + p * dgap + gap * dgap;
    let k_prime = vpp * s / v + w * u / (s * v) - w * w * s / (v * v);
    (-t / (s * v) + k_prime) / (1.0 + v * v)
}

/// `h k` at a point, the boundary term produced by integrating by parts.
pub fn gamma_boundary(p: f64, gap: f64, dgap: f64) -> f64 {
    let v = p + gap;
    let s = (gap * (gap + 2.0 * p)).sqrt();
    (1.0 + dgap) * s / (v * (1.0 + v * v))
}

/// `J` from the measure form: `∫₀^{p₀} G dp + v'(0⁺)/(1 + M²)`.
///
/// On the reflected curve `p ↦ v(|p|)` the differential `dk` has an atom of
/// mass `2v'(0⁺)` at `p = 0`; half of it belongs to `[0, p₀]`. At `p₀` the
/// boundary term vanishes.
pub fn gamma_form_j(sol: &ExtremalSolution) -> Result<f64> {
    let tol = QuadTol::default();
    let g = |p: f64| -> Result<f64> {
        let a = sol.eval(p)?;
        Ok(gamma_integrand(p, a.gap, a.dgap, a.vpp))
    };
    let lin = integrate(g, 0.0, sol.r, tol)?;
    let arc = integrate(g, sol.r, sol.p0, tol)?;
    let atom = sol.slope0 / (1.0 + sol.M * sol.M);
    Ok(lin.value + arc.value + atom)
}
