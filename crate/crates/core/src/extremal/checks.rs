//! Necessary-condition checks along an assembled extremal: the adjoint sign,
//! the Jacobi (conjugate point) test, non-intersection of the family and the
//! Euler–Lagrange residual.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::lagrangian::{
    euler_lagrange_defect, singular_arc_accel, singular_arc_rhs, LagrangianPoint,
};
use crate::numerics::{integrate, QuadTol};
use crate::ode::{integrate_variational, DenseSolution, Forcing, VariationalCoeffs};

use super::newton::{nu_derivatives_at_one, NewtonForcing, SingularArc, NEWTON_LAMBDA};
use super::profile::{assemble_profile_near, check_alpha, ScaledProfile};

/// Neighbourhood of `q = 1` excluded from the conjugate-point scan.
pub const CONJUGATE_EXCLUSION: f64 = 1e-2;
/// Below this `|q − 1|` the Jacobi coefficients use their limits at `q = 1`.
const JACOBI_SERIES_CUTOFF: f64 = 1e-5;

/// `ω(q̃)` sampled on `[0, ρ]`.
#[derive(Debug, Clone, Serialize)]
pub struct AdjointProfile {
    pub samples: Vec<(f64, f64)>,
}

fn defect(profile: &ScaledProfile, q: f64) -> Result<f64> {
    euler_lagrange_defect(&profile.affine().point(q))
}

/// `ω(q̃) = ∫_{q̃}^ρ (q̃ − q)(g_η − g_{qη'} − g_{ηη'}η') dq`.
pub fn omega_at(profile: &ScaledProfile, q_tilde: f64) -> Result<f64> {
    if q_tilde >= profile.rho {
        return Ok(0.0);
    }
    Ok(integrate(
        |q| Ok((q_tilde - q) * defect(profile, q)?),
        q_tilde,
        profile.rho,
        QuadTol::default(),
    )?
    .value)
}

/// `ω'(q̃) = ∫_{q̃}^ρ (g_η − g_{qη'} − g_{ηη'}η') dq`.
pub fn omega_prime_at(profile: &ScaledProfile, q_tilde: f64) -> Result<f64> {
    if q_tilde >= profile.rho {
        return Ok(0.0);
    }
    Ok(integrate(|q| defect(profile, q), q_tilde, profile.rho, QuadTol::default())?.value)
}

/// `ω` on `n + 1` equispaced points of `[0, ρ]`.
pub fn adjoint_omega(profile: &ScaledProfile, n: usize) -> Result<AdjointProfile> {
    let n = n.max(1);
    let samples = (0..=n)
        .map(|i| {
            let q = profile.rho * i as f64 / n as f64;
            let q = if i == n { profile.rho } else { q };
            Ok((q, omega_at(profile, q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AdjointProfile { samples })
}

/// Solution `ζ` of the variational equation along `κ` with `ζ(1) = 0`,
/// `ζ'(1) = 1`, stored in `t = q − 1`.
#[derive(Debug, Clone)]
pub struct JacobiSolution {
    pub zeta: DenseSolution,
    /// `min |ζ|` over `[0, 1 − CONJUGATE_EXCLUSION]`; zero if `ζ` changes sign.
    pub min_abs_zeta: f64,
}

impl JacobiSolution {
    pub fn eval(&self, q: f64) -> Result<(f64, f64)> {
        let s = self.zeta.eval(q - 1.0)?;
        Ok((s.x, s.xd))
    }
}

/// Linearization of the singular-arc equation along `κ`, written as
/// `ÿ = 4λ(tẏ − y)/t² + a(t) y/t + b(t) ẏ` with `t = q − 1`.
fn jacobi_coefficients(profile: &ScaledProfile, t: f64) -> (f64, f64) {
    let lambda = NEWTON_LAMBDA;
    let forcing = NewtonForcing::new(1.0, profile.alpha);
    if t.abs() < JACOBI_SERIES_CUTOFF {
        let d = nu_derivatives_at_one(profile.alpha, 3);
        let u = d[3] / d[2];
        // x = ẍ₀t²/2 (1 + ut/3 + …) gives ẋ/x = (2/t)(1 + ut/6 + …)
        let a0 = -4.0 * lambda * u / 3.0;
        let b0 = 4.0 * lambda * u / 6.0 + forcing.g_xdot(0.0, 0.0, 0.0);
        return (a0, b0);
    }
    let k = profile.eval(1.0 + t).expect("q in [0, 1]");
    let (x, xd) = (k.gap, k.dgap);
    // coefficients of y and ẏ in the linearized right-hand side
    let cy = -lambda * xd * xd / (x * x) + forcing.g_x(t, x, xd);
    let cyd = 2.0 * lambda * xd / x + forcing.g_xdot(t, x, xd);
    (t * cy + 4.0 * lambda / t, cyd - 4.0 * lambda / t)
}

/// Integrates the Jacobi equation from `q = 1` to `q = 0` across the
/// switching point and reports the smallest `|ζ|` away from `q = 1`.
pub fn jacobi_check(profile: &ScaledProfile, tol: f64) -> Result<JacobiSolution> {
    let coeffs = VariationalCoeffs::new(
        NEWTON_LAMBDA,
        |t| jacobi_coefficients(profile, t).0,
        |t| jacobi_coefficients(profile, t).1,
        |_| 0.0,
    )?;
    let zeta = integrate_variational(&coeffs, 1.0, -1.0, tol)?;
    let limit = -CONJUGATE_EXCLUSION;
    let mut ts: Vec<f64> = zeta
        .breakpoints()
        .iter()
        .copied()
        .filter(|&t| t <= limit)
        .collect();
    ts.extend((0..=4000).map(|i| -1.0 + (1.0 - CONJUGATE_EXCLUSION) * i as f64 / 4000.0));
    ts.sort_by(f64::total_cmp);
    let mut min_abs = f64::INFINITY;
    let mut sign = 0.0;
    for t in ts {
        let y = zeta.eval(t)?.x;
        if sign != 0.0 && y.signum() != sign {
            min_abs = 0.0;
        }
        sign = y.signum();
        min_abs = min_abs.min(y.abs());
    }
    Ok(JacobiSolution {
        zeta,
        min_abs_zeta: min_abs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    /// Constant sign of `qκ' − κ + 2α ∂κ/∂α` on the grid.
    pub sign: f64,
    pub min_abs: f64,
    pub max_abs: f64,
}

/// Sign of `Δ ∝ qκ' − κ + 2α ∂κ/∂α` on `n + 1` points of `[0, 1 − δq]`, with
/// `∂κ/∂α` by a central difference of step `delta_alpha`. At `α = 0` the
/// derivative term carries the factor `α` and is dropped.
pub fn field_jacobian_check(
    profile: &ScaledProfile,
    delta_alpha: f64,
    delta_q: f64,
    n: usize,
    tol: f64,
) -> Result<FieldReport> {
    let alpha = profile.alpha;
    let neighbours = if alpha > 0.0 {
        if !(delta_alpha > 0.0 && delta_alpha < alpha) {
            return Err(Error::InvalidInput(format!(
                "delta_alpha = {delta_alpha} must lie in (0, alpha = {alpha})"
            )));
        }
        check_alpha(alpha + delta_alpha)?;
        let lo = assemble_profile_near(alpha - delta_alpha, tol, profile.rho)?;
        let hi = assemble_profile_near(alpha + delta_alpha, tol, profile.rho)?;
        Some((lo, hi))
    } else {
        None
    };
    let mut report = FieldReport {
        sign: 0.0,
        min_abs: f64::INFINITY,
        max_abs: 0.0,
    };
    for i in 0..=n {
        let q = (1.0 - delta_q) * i as f64 / n as f64;
        let k = profile.eval(q)?;
        let mut delta = q * k.vp - k.v;
        if let Some((lo, hi)) = &neighbours {
            let dk = (hi.kappa(q)? - lo.kappa(q)?) / (2.0 * delta_alpha);
            delta += 2.0 * alpha * dk;
        }
        if report.sign != 0.0 && delta.signum() != report.sign {
            return Err(Error::SignChange { q });
        }
        report.sign = delta.signum();
        report.min_abs = report.min_abs.min(delta.abs());
        report.max_abs = report.max_abs.max(delta.abs());
    }
    Ok(report)
}

/// Residual of the first-order invariant form of the `α = 0` equation,
/// `dx/dt = 2 + 3/2 (x/t + t/x) − x/(2t(t² − 1))` with `t = ν/q`,
/// `x = (qν' − ν)/q` and `dx/dt = ν'' q/x − 1`.
pub fn abel_residual(nu_hat: &SingularArc, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q = {q} must be positive")));
    }
    let a = nu_hat.eval(q)?;
    let t = a.v / q;
    // qν' − ν = q(ν' − 1) − (ν − q)
    let x = (q * a.dgap - a.gap) / q;
    // t² − 1 = (ν − q)(ν + q)/q²
    let t2m1 = a.gap * (a.v + q) / (q * q);
    if x == 0.0 || t2m1.abs() < 1e-14 {
        return Err(Error::Domain(format!(
            "invariant form degenerates at q = {q} (x = {x}, t² − 1 = {t2m1})"
        )));
    }
    let lhs = a.vpp * q / x - 1.0;
    let rhs = 2.0 + 1.5 * (x / t + t / x) - x / (2.0 * t * t2m1);
    Ok(lhs - rhs)
}

/// `|ν''(q) − (g_ν − g_{qν'} − ν' g_{νν'})/g_{ν'ν'}|` on the singular arc.
///
/// The quotient is evaluated in its explicit form; the separate partials grow
/// like powers of `1/(ν − q)` and cancel, which costs all digits near `q = 1`.
pub fn euler_lagrange_residual(profile: &ScaledProfile, q: f64) -> Result<f64> {
    let a = profile.nu.eval(q)?;
    let pt = LagrangianPoint::from_gaps(q, a.gap, a.dgap, profile.alpha);
    Ok((a.vpp - singular_arc_rhs(&pt)).abs())
}

/// As [`euler_lagrange_residual`] with the quotient of the separate partials;
/// only meaningful away from `q = 1`.
pub fn euler_lagrange_residual_from_partials(profile: &ScaledProfile, q: f64) -> Result<f64> {
    let a = profile.nu.eval(q)?;
    let pt = LagrangianPoint::from_gaps(q, a.gap, a.dgap, profile.alpha);
    Ok((a.vpp - singular_arc_accel(&pt)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::profile::assemble_profile;
    use crate::extremal::switching::I_of;
    use crate::ode::DEFAULT_TOL;

    #[test]
    fn adjoint_sign_and_ends() {
        let prof = assemble_profile(0.0, DEFAULT_TOL).unwrap();
        let om = adjoint_omega(&prof, 50).unwrap();
        assert_eq!(om.samples.last().unwrap().1, 0.0);
        let w0 = om.samples[0].1;
        assert!(w0.abs() < 1e-10);
        assert!((w0 + I_of(prof.rho, &prof.nu).unwrap()).abs() < 1e-12);
        for &(q, w) in &om.samples {
            if q > 0.01 && q < prof.rho - 0.01 {
                assert!(w < 0.0, "omega({q}) = {w}");
            }
        }
        assert!(omega_prime_at(&prof, 0.0).unwrap() < 0.0);
        assert!(omega_prime_at(&prof, prof.rho).unwrap() == 0.0);
    }

    #[test]
    fn jacobi_has_no_conjugate_point() {
        let prof = assemble_profile(0.0, DEFAULT_TOL).unwrap();
        let j = jacobi_check(&prof, DEFAULT_TOL).unwrap();
        let (z, zd) = j.eval(1.0).unwrap();
        assert_eq!((z, zd), (0.0, 1.0));
        assert!(j.min_abs_zeta > 0.0);
    }

    #[test]
    fn jacobi_coefficients_are_continuous_at_the_cutoff() {
        let prof = assemble_profile(0.01, DEFAULT_TOL).unwrap();
        let (a0, b0) = jacobi_coefficients(&prof, -0.5 * JACOBI_SERIES_CUTOFF);
        let (a1, b1) = jacobi_coefficients(&prof, -2.0 * JACOBI_SERIES_CUTOFF);
        assert!((a0 - a1).abs() < 1e-3 && (b0 - b1).abs() < 1e-3, "{a0} {a1} {b0} {b1}");
    }

    #[test]
    fn field_sign_is_negative() {
        let prof = assemble_profile(0.0, DEFAULT_TOL).unwrap();
        let r = field_jacobian_check(&prof, 0.0, 1e-2, 200, DEFAULT_TOL).unwrap();
        assert_eq!(r.sign, -1.0);
        // at q = 0: qκ' − κ = −κ(0)
        assert!((r.max_abs - prof.height0).abs() < 1e-12);
    }

    #[test]
    fn abel_invariant_holds() {
        let prof = assemble_profile(0.0, DEFAULT_TOL).unwrap();
        for q in [0.3, 0.5, 0.9] {
            let r = abel_residual(&prof.nu, q).unwrap();
            assert!(r.abs() < 1e-6, "{q}: {r}");
        }
        assert!(abel_residual(&prof.nu, 1.0).is_err());
    }

    #[test]
    fn euler_lagrange_on_arc() {
        let prof = assemble_profile(0.1, DEFAULT_TOL).unwrap();
        for i in 0..200 {
            let q = prof.rho + (1.0 - prof.rho) * i as f64 / 200.0;
            let r = euler_lagrange_residual(&prof, q).unwrap();
            assert!(r < 1e-6, "{q}: {r}");
        }
        for i in 0..50 {
            let q = prof.rho + (0.99 - prof.rho) * i as f64 / 49.0;
            assert!(euler_lagrange_residual_from_partials(&prof, q).unwrap() < 1e-6);
        }
    }
}
