//! Assembled extremals: the affine part on `[0, ρ]` glued C¹ to the singular
//! arc on `[ρ, 1]`, in scaled and physical coordinates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::lagrangian::LagrangianPoint;
use crate::functional::value::j_scaled;
use crate::numerics::{brent, RootTol};

use super::newton::{solve_nu, ArcPoint, SingularArc};
use super::switching::{find_switch_near, AffinePart, R_HAT_PREDICTOR};

/// Largest admissible `α`; beyond it the switching point is not guaranteed.
pub const ALPHA_MAX: f64 = 1.0 / 3.0;

/// Asymptotic ratio `M / p₀` for large `p₀`, used only to start the search
/// in [`solve_for_height`].
const HEIGHT_RATIO_GUESS: f64 = 0.315736;

pub fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be >= 0")));
    }
    if alpha >= ALPHA_MAX {
        return Err(Error::Validity(format!(
            "alpha = {alpha} >= 1/3 (p0 <= sqrt(3)): outside the range where the switching equation is known to have a root"
        )));
    }
    Ok(())
}

/// `κ(q, α)` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct ScaledProfile {
    pub alpha: f64,
    pub rho: f64,
    pub nu: SingularArc,
    /// `ν'(ρ)`, the slope of the affine part.
    pub slope: f64,
    /// `κ(0) = ν(ρ) − ρν'(ρ)`
    pub height0: f64,
    affine: AffinePart,
}

impl ScaledProfile {
    pub fn from_parts(nu: SingularArc, rho: f64) -> Result<Self> {
        let affine = AffinePart::at(&nu, rho)?;
        Ok(Self {
            alpha: nu.c(),
            rho,
            slope: affine.slope,
            height0: affine.height0(),
            nu,
            affine,
        })
    }

    pub fn affine(&self) -> &AffinePart {
        &self.affine
    }

    /// `κ`, `κ'`, `κ''` at `q ∈ [q_min, 1]`; `κ'' = 0` on the affine part.
    pub fn eval(&self, q: f64) -> Result<ArcPoint> {
        if q < self.rho {
            if q < 0.0 {
                return Err(Error::OutOfDomain { t: q, lo: 0.0, hi: 1.0 });
            }
            let a = &self.affine;
            let gap = a.gap_rho + (a.slope - 1.0) * (q - a.rho);
            Ok(ArcPoint {
                p: q,
                v: q + gap,
                vp: a.slope,
                vpp: 0.0,
                gap,
                dgap: a.slope - 1.0,
            })
        } else {
            self.nu.eval(q)
        }
    }

    pub fn kappa(&self, q: f64) -> Result<f64> {
        Ok(self.eval(q)?.v)
    }

    /// The scaled integrand's argument at `q`.
    pub fn lagrangian_point(&self, q: f64) -> Result<LagrangianPoint> {
        let k = self.eval(q)?;
        Ok(LagrangianPoint::from_gaps(q, k.gap, k.dgap, self.alpha).with_vpp(k.vpp))
    }

    /// Checks the structural invariants on a grid of `n` points.
    pub fn validate(&self, n: usize) -> Result<()> {
        let end = self.nu.eval(1.0)?;
        if (end.v - 1.0).abs() > 1e-12 || (end.vp - 1.0).abs() > 1e-12 {
            return Err(Error::Validity(format!(
                "end condition violated: nu(1) = {}, nu'(1) = {}",
                end.v, end.vp
            )));
        }
        if !(self.slope > 0.0 && self.slope < 1.0) {
            return Err(Error::Validity(format!("slope {} not in (0, 1)", self.slope)));
        }
        for i in 0..n {
            let q = self.rho + (1.0 - self.rho) * i as f64 / n as f64;
            let a = self.nu.eval(q)?;
            if !(a.gap > 0.0) {
                return Err(Error::Validity(format!("nu(q) <= q at q = {q}")));
            }
            if !(a.vpp > 0.0) {
                return Err(Error::Validity(format!("nu''(q) <= 0 at q = {q}")));
            }
        }
        Ok(())
    }

    pub fn record(&self, n: usize) -> ProfileRecord {
        let nu_samples = (0..n.max(2))
            .map(|i| {
                let q = i as f64 / (n.max(2) - 1) as f64;
                let k = self.eval(q).expect("q in [0, 1]");
                (q, k.v, k.vp)
            })
            .collect();
        ProfileRecord {
            alpha: self.alpha,
            rho: self.rho,
            slope: self.slope,
            height0: self.height0,
            nu_samples,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRecord {
    pub alpha: f64,
    pub rho: f64,
    pub slope: f64,
    pub height0: f64,
    /// `(q, κ, κ')`
    pub nu_samples: Vec<(f64, f64, f64)>,
}

/// Solves for `ν`, locates `ρ` nearest to `predictor` and glues the affine part.
pub fn assemble_profile_near(alpha: f64, tol: f64, predictor: f64) -> Result<ScaledProfile> {
    check_alpha(alpha)?;
    let nu = solve_nu(alpha, tol)?;
    let rho = find_switch_near(&nu, predictor)?;
    let profile = ScaledProfile::from_parts(nu, rho)?;
    profile.validate(200)?;
    Ok(profile)
}

pub fn assemble_profile(alpha: f64, tol: f64) -> Result<ScaledProfile> {
    assemble_profile_near(alpha, tol, R_HAT_PREDICTOR)
}

/// The extremal `v(p) = p₀ κ(p/p₀)` on `[0, p₀]`.
#[allow(non_snake_case)]
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    pub p0: f64,
    pub M: f64,
    pub r: f64,
    /// `v'(0⁺)`
    pub slope0: f64,
    pub J: f64,
    pub profile: ScaledProfile,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalRecord {
    pub alpha: f64,
    pub rho: f64,
    pub slope: f64,
    pub height0: f64,
    pub p0: f64,
    pub M: f64,
    pub r: f64,
    pub J: f64,
    pub nu_samples: Vec<(f64, f64, f64)>,
}

impl ExtremalSolution {
    /// `v`, `v'`, `v''` at `p ∈ [0, p₀]`.
    pub fn eval(&self, p: f64) -> Result<ArcPoint> {
        let q = if p == self.p0 { 1.0 } else { p / self.p0 };
        let k = self.profile.eval(q)?;
        Ok(ArcPoint {
            p,
            v: self.p0 * k.v,
            vp: k.vp,
            vpp: k.vpp / self.p0,
            gap: self.p0 * k.gap,
            dgap: k.dgap,
        })
    }

    pub fn v(&self, p: f64) -> Result<f64> {
        Ok(self.eval(p)?.v)
    }

    pub fn lagrangian_point(&self, p: f64) -> Result<LagrangianPoint> {
        let a = self.eval(p)?;
        Ok(LagrangianPoint::from_gaps(p, a.gap, a.dgap, 1.0).with_vpp(a.vpp))
    }

    /// Finds `p ∈ [r, p₀]` with `v'(p) = slope` for `slope ∈ [slope0, 1]`.
    pub fn p_of_slope(&self, slope: f64) -> Result<f64> {
        if slope <= self.slope0 {
            return Ok(self.r);
        }
        if slope >= 1.0 {
            return Ok(self.p0);
        }
        let q = self.profile.nu.solve_slope(slope, self.profile.rho, 1.0)?;
        Ok(self.p0 * q)
    }

    pub fn record(&self, n: usize) -> ExtremalRecord {
        let pr = self.profile.record(n);
        ExtremalRecord {
            alpha: pr.alpha,
            rho: pr.rho,
            slope: pr.slope,
            height0: pr.height0,
            p0: self.p0,
            M: self.M,
            r: self.r,
            J: self.J,
            nu_samples: pr.nu_samples,
        }
    }
}

/// Physical extremal for `p₀ = 1/√α`.
pub fn unscale(profile: ScaledProfile, p0: f64) -> Result<ExtremalSolution> {
    let expected = 1.0 / profile.alpha.sqrt();
    if !((p0 - expected).abs() <= 1e-12 * expected) {
        return Err(Error::InconsistentScale {
            p0,
            alpha: profile.alpha,
            expected,
        });
    }
    let j = profile.alpha * j_scaled(&profile)?;
    Ok(ExtremalSolution {
        p0,
        M: p0 * profile.height0,
        r: p0 * profile.rho,
        slope0: profile.slope,
        J: j,
        profile,
    })
}

/// Extremal for a given `p₀ > √3`.
pub fn solve_for_p0(p0: f64, tol: f64) -> Result<ExtremalSolution> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::InvalidInput(format!("p0 = {p0} must be positive")));
    }
    let alpha = 1.0 / (p0 * p0);
    unscale(assemble_profile(alpha, tol)?, p0)
}

/// Extremal whose body has height `M`: root of `p₀ ↦ p₀ κ(0; 1/p₀²) − M`.
#[allow(non_snake_case)]
pub fn solve_for_height(M: f64, tol: f64) -> Result<ExtremalSolution> {
    if !(M > 0.0 && M.is_finite()) {
        return Err(Error::InvalidInput(format!("M = {M} must be positive")));
    }
    let p_min = ALPHA_MAX.recip().sqrt() * (1.0 + 1e-6);
    let mut predictor = R_HAT_PREDICTOR;
    let mut height = |p0: f64| -> Result<f64> {
        let prof = assemble_profile_near(1.0 / (p0 * p0), tol, predictor)?;
        predictor = prof.rho;
        Ok(p0 * prof.height0 - M)
    };

    let guess = (M / HEIGHT_RATIO_GUESS).max(p_min);
    let mut lo = (0.95 * guess).max(p_min);
    let mut h_lo = height(lo)?;
    while h_lo > 0.0 {
        if lo <= p_min {
            return Err(Error::Validity(format!(
                "M = {M} is below the height reachable with p0 > sqrt(3)"
            )));
        }
        lo = (0.8 * lo).max(p_min);
        h_lo = height(lo)?;
    }
    let mut hi = 1.05 * guess.max(lo);
    let mut h_hi = height(hi)?;
    let mut expansions = 0;
    while h_hi < 0.0 {
        lo = hi;
        hi *= 1.25;
        h_hi = height(hi)?;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::NoRoot(format!("no p0 bracket found for M = {M}")));
        }
    }
    let p0 = brent(
        &mut height,
        lo,
        hi,
        RootTol {
            x_tol: 1e-12 * hi,
            ..RootTol::default()
        },
    )?;
    let profile = assemble_profile_near(1.0 / (p0 * p0), tol, predictor)?;
    unscale(profile, p0)
}

/// Constants of the limit extremal `α = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct LimitConstants {
    /// `ρ(0)`
    pub r_hat: f64,
    /// `κ̂(0)`
    pub m_hat: f64,
    /// `ν̂(0)`
    pub nu_hat_0: f64,
    /// `ν̂'(ρ̂)`
    pub slope_hat: f64,
    /// `ν̂'(0)`
    pub nu_hat_prime_0: f64,
    /// Bracket of the scaled functional at `α = 0`.
    pub j_hat: f64,
}

pub fn limit_constants(tol: f64) -> Result<(LimitConstants, ScaledProfile)> {
    let profile = assemble_profile(0.0, tol)?;
    let at0 = profile.nu.eval(0.0)?;
    let c = LimitConstants {
        r_hat: profile.rho,
        m_hat: profile.height0,
        nu_hat_0: at0.v,
        slope_hat: profile.slope,
        nu_hat_prime_0: at0.vp,
        j_hat: j_scaled(&profile)?,
    };
    Ok((c, profile))
}
