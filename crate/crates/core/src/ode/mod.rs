//! Second-order initial value problems with a movable `λ ẋ²/x` singularity at
//! `t = 0`, and the linear variational equations that go with them.

pub mod dense;
pub mod ivp;
pub mod rk;
pub mod seed;
pub mod variational;

use serde::Serialize;

pub use dense::{DenseRecord, DenseSolution, State};
pub use ivp::{ClosureForcing, ConstantForcing, Forcing, SingularIVP};
pub use seed::{picard_seed, Seed, SeedReport, DEFAULT_EPSILON};
pub use variational::{integrate_variational, variational_accel_at_origin, VariationalCoeffs};

use crate::error::{Error, Result};
use rk::{integrate_second_order, StepControl};

/// Default local error tolerance per step.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest step taken by the classical stepper. Keeps the quintic Hermite
/// interpolant's second derivative within the residual budget.
pub const MAX_STEP: f64 = 0.01;

/// Ratio of the stepper's local tolerance to the requested tolerance.
pub const STEP_TOL_FACTOR: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct IntegrationReport {
    pub seed: SeedReport,
    pub steps: usize,
}

/// Integrates the singular IVP from `t = 0` to `t_end`.
pub fn integrate<F: Forcing>(ivp: &SingularIVP<F>, t_end: f64, tol: f64) -> Result<DenseSolution> {
    integrate_detailed(ivp, t_end, tol).map(|(sol, _)| sol)
}

/// Like [`integrate`], also returning the seed and stepping diagnostics.
pub fn integrate_detailed<F: Forcing>(
    ivp: &SingularIVP<F>,
    t_end: f64,
    tol: f64,
) -> Result<(DenseSolution, IntegrationReport)> {
    if t_end == 0.0 || !t_end.is_finite() {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be nonzero")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol = {tol} must be positive")));
    }
    let seed = picard_seed(ivp, DEFAULT_EPSILON, tol)?;
    let dir = t_end.signum();
    let tau = seed.tau;
    if t_end.abs() <= tau {
        let (lo, hi) = if dir > 0.0 { (0.0, t_end) } else { (t_end, 0.0) };
        let report = IntegrationReport {
            seed: seed.report,
            steps: 0,
        };
        return Ok((seed.solution.restrict(lo, hi), report));
    }
    let seed_part = if dir > 0.0 {
        seed.solution.restrict(0.0, tau)
    } else {
        seed.solution.restrict(-tau, 0.0)
    };
    let start = seed.solution.eval(dir * tau)?;
    let x_sign = start.x.signum();
    // near the origin x ~ t², and the singular term amplifies absolute errors
    // in x by 1/x, so the absolute tolerance follows the size of x at handoff.
    // Hermite interpolation turns per-step errors δ into second-derivative
    // errors of order δ/h², hence the tighter internal tolerance.
    let step_tol = STEP_TOL_FACTOR * tol;
    let ctl = StepControl {
        tol: step_tol,
        atol: step_tol * start.x.abs().min(1.0),
        h_max: MAX_STEP,
        h_init: 0.25 * tau,
    };
    let states = integrate_second_order(
        |t, x, xd| ivp.rhs(t, x, xd),
        start,
        t_end,
        ctl,
        |s| {
            if s.x * x_sign <= 0.0 {
                Err(Error::BlowUp {
                    t: s.t,
                    reason: "x reached zero".into(),
                })
            } else if !s.xdd.is_finite() {
                Err(Error::BlowUp {
                    t: s.t,
                    reason: "right-hand side is not finite".into(),
                })
            } else {
                Ok(())
            }
        },
    )?;
    let steps = states.len() - 1;
    let stepped = DenseSolution::from_states(&states);
    let solution = if dir > 0.0 {
        DenseSolution::concat(seed_part, stepped)
    } else {
        DenseSolution::concat(stepped, seed_part)
    };
    Ok((
        solution,
        IntegrationReport {
            seed: seed.report,
            steps,
        },
    ))
}

/// `sup |ẍ - λẋ²/x - g|` over `n` equispaced points of the domain, skipping
/// `t = 0` itself.
pub fn max_residual<F: Forcing>(ivp: &SingularIVP<F>, sol: &DenseSolution, n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in sol.samples(n) {
        if s.t == 0.0 {
            continue;
        }
        let r = (s.xdd - ivp.rhs(s.t, s.x, s.xd)).abs();
        if !r.is_finite() {
            return Err(Error::Evaluation(format!("residual not finite at t = {}", s.t)));
        }
        worst = worst.max(r);
    }
    Ok(worst)
}
