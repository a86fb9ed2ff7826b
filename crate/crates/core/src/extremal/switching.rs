//! The switching condition `I(ρ, α) = 0` joining the affine part of the
//! extremal to the singular arc.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functional::lagrangian::{euler_lagrange_defect, LagrangianPoint};
use crate::numerics::{brent, integrate, integrate_fn, QuadTol, RootTol};

use super::newton::SingularArc;

/// Paper value of the limit switching point, used as the continuation
/// predictor when several roots exist.
pub const R_HAT_PREDICTOR: f64 = 0.108984;

const SCAN_POINTS: usize = 100;

/// The affine continuation `η(q) = ν'(ρ)(q − ρ) + ν(ρ)` of the arc below `ρ`.
#[derive(Debug, Clone, Copy)]
pub struct AffinePart {
    pub rho: f64,
    /// `ν(ρ) − ρ`
    pub gap_rho: f64,
    /// `ν'(ρ)`
    pub slope: f64,
    pub alpha: f64,
}

impl AffinePart {
    pub fn at(nu: &SingularArc, rho: f64) -> Result<Self> {
        let a = nu.eval(rho)?;
        Ok(Self {
            rho,
            gap_rho: a.gap,
            slope: a.vp,
            alpha: nu.c(),
        })
    }

    /// `η(0) = ν(ρ) − ρν'(ρ)`
    pub fn height0(&self) -> f64 {
        self.gap_rho + self.rho * (1.0 - self.slope)
    }

    pub fn point(&self, q: f64) -> LagrangianPoint {
        // η − q = (ν(ρ) − ρ) + (ν'(ρ) − 1)(q − ρ)
        let gap = self.gap_rho + (self.slope - 1.0) * (q - self.rho);
        LagrangianPoint::from_gaps(q, gap, self.slope - 1.0, self.alpha)
    }

    fn check(&self) -> Result<()> {
        if !(self.gap_rho > 0.0 && self.height0() > 0.0) {
            return Err(Error::Domain(format!(
                "affine part meets η = q on [0, {}] (η(0) = {}, η(ρ) − ρ = {})",
                self.rho,
                self.height0(),
                self.gap_rho
            )));
        }
        Ok(())
    }
}

/// `I(ρ, α) = ∫₀^ρ q (g_η − g_{qη'} − g_{ηη'}η') dq` along the affine part.
#[allow(non_snake_case)]
pub fn I_of(rho: f64, nu: &SingularArc) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidInput(format!("rho = {rho} must lie in (0, 1)")));
    }
    let part = AffinePart::at(nu, rho)?;
    part.check()?;
    let r = integrate(
        |q| Ok(q * euler_lagrange_defect(&part.point(q))?),
        0.0,
        rho,
        QuadTol::default(),
    )?;
    Ok(r.value)
}

/// Closed form of `I(ρ, 0)` in terms of `ν̂(ρ)` and `ν̂'(ρ)`.
#[allow(non_snake_case)]
pub fn I_closed_form_alpha0(rho: f64, nu_hat: &SingularArc) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidInput(format!("rho = {rho} must lie in (0, 1)")));
    }
    let a = nu_hat.eval(rho)?;
    let (n, w) = (a.v, a.vp);
    let b = n - rho * w;
    if b == 0.0 {
        return Err(Error::Domain("rho ν'(ρ) − ν(ρ) vanishes".into()));
    }
    let s = (a.gap * (a.gap + 2.0 * rho)).sqrt();
    let bracket = 3.0 * w * (rho / n).asin() - 2.0 - 2.0 * w * w
        + s / n.powi(4) * (b.powi(3) + b * rho * rho * w * w + n.powi(3) * (1.0 + 2.0 * w * w));
    Ok(bracket / (b * b))
}

/// All sign changes of `I(·, α)` on an even grid of `(0, 1)`, polished by
/// Brent's method.
pub fn switch_roots(nu: &SingularArc) -> Result<Vec<f64>> {
    let grid: Vec<f64> = (1..SCAN_POINTS).map(|k| k as f64 / SCAN_POINTS as f64).collect();
    let mut values = Vec::with_capacity(grid.len());
    for &rho in &grid {
        // points where the affine part leaves the admissible region are skipped
        values.push(I_of(rho, nu).ok());
    }
    let mut roots = Vec::new();
    for k in 0..grid.len() - 1 {
        if let (Some(a), Some(b)) = (values[k], values[k + 1]) {
            if a == 0.0 {
                roots.push(grid[k]);
            } else if a.signum() != b.signum() && b != 0.0 {
                let tol = RootTol {
                    x_tol: 1e-15,
                    ..RootTol::default()
                };
                roots.push(brent(|r| I_of(r, nu), grid[k], grid[k + 1], tol)?);
            }
        }
    }
    Ok(roots)
}

/// Root of `I(·, α)` in `(0, 1)`; with several roots the one nearest to
/// `predictor` is returned.
pub fn find_switch_near(nu: &SingularArc, predictor: f64) -> Result<f64> {
    let roots = switch_roots(nu)?;
    let rho = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - predictor).abs().total_cmp(&(b - predictor).abs()))
        .ok_or_else(|| {
            Error::NoRoot(format!(
                "I(rho, alpha = {}) has no sign change on (0, 1)",
                nu.c()
            ))
        })?;
    let residual = I_of(rho, nu)?;
    if residual.abs() >= 1e-12 {
        return Err(Error::NoRoot(format!(
            "switching point {rho} leaves |I| = {residual:.3e}"
        )));
    }
    Ok(rho)
}

pub fn find_switch(nu: &SingularArc) -> Result<f64> {
    find_switch_near(nu, R_HAT_PREDICTOR)
}

/// `∫₀¹ √q (1 − 2q) / ((q² + α)² √(1 − q)) dq` by quadrature, after
/// `q = 1 − s²` removes the endpoint singularity.
pub fn endpoint_integral_quadrature(alpha: f64) -> f64 {
    integrate_fn(
        |s| {
            let q = 1.0 - s * s;
            let d = q * q + alpha;
            2.0 * q.sqrt() * (1.0 - 2.0 * q) / (d * d)
        },
        0.0,
        1.0,
        QuadTol {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            ..QuadTol::default()
        },
    )
    .value
}

/// Closed form of [`endpoint_integral_quadrature`]:
/// `π√2/8 · (1 − α − √α√(1+α)) / (α^{5/4} (1+α)^{3/2} √(√α + √(1+α)))`.
pub fn endpoint_integral_closed_form(alpha: f64) -> f64 {
    let sa = alpha.sqrt();
    let s1 = (1.0 + alpha).sqrt();
    PI * 2f64.sqrt() / 8.0 * (1.0 - alpha - sa * s1)
        / (alpha.powf(1.25) * (1.0 + alpha).powf(1.5) * (sa + s1).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::newton::solve_nu;
    use crate::ode::DEFAULT_TOL;

    #[test]
    fn limit_switching_point() {
        let nu = solve_nu(0.0, DEFAULT_TOL).unwrap();
        let rho = find_switch(&nu).unwrap();
        assert!((rho - 0.108984).abs() < 1e-6, "{rho}");
        // the same root from the closed form
        let cf = I_closed_form_alpha0(rho, &nu).unwrap();
        assert!(cf.abs() < 1e-10, "{cf}");
    }

    #[test]
    fn closed_form_agrees_with_quadrature() {
        let nu = solve_nu(0.0, DEFAULT_TOL).unwrap();
        for rho in [0.05, 0.1, 0.2, 0.5] {
            let a = I_of(rho, &nu).unwrap();
            let b = I_closed_form_alpha0(rho, &nu).unwrap();
            assert!((a - b).abs() < 1e-8, "{rho}: {a} vs {b}");
        }
    }

    #[test]
    fn sign_near_the_ends() {
        let nu = solve_nu(0.0, DEFAULT_TOL).unwrap();
        assert!(I_of(0.01, &nu).unwrap() < 0.0);
        assert!(I_of(0.99, &nu).unwrap() > 0.0);
        // quadratic decay at ρ → 0
        let r1 = I_of(0.002, &nu).unwrap() / 0.002f64.powi(2);
        let r2 = I_of(0.001, &nu).unwrap() / 0.001f64.powi(2);
        assert!(r1 < 0.0 && ((r1 - r2) / r2).abs() < 0.05, "{r1} {r2}");
    }

    #[test]
    fn endpoint_integral_identity() {
        for alpha in [0.1, 0.2, 0.3] {
            let q = endpoint_integral_quadrature(alpha);
            let c = endpoint_integral_closed_form(alpha);
            assert!((q - c).abs() < 1e-8, "{alpha}: {q} vs {c}");
        }
        assert!(endpoint_integral_closed_form(1.0 / 3.0).abs() < 1e-10);
        assert!(endpoint_integral_closed_form(0.3) > 0.0);
        assert!(endpoint_integral_closed_form(0.4) < 0.0);
    }

    #[test]
    fn rho_outside_unit_interval_is_rejected() {
        let nu = solve_nu(0.0, DEFAULT_TOL).unwrap();
        assert!(I_of(0.0, &nu).is_err());
        assert!(I_of(1.0, &nu).is_err());
    }
}
