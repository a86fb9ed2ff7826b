//! Contraction-mapping seed near the singular point `t = 0`.
//!
//! The fixed point of
//! `F(x)(t) = ∫₀ᵗ (t-s) (λ ẋ²/x + g(s, x, ẋ)) ds`
//! is computed on `[-τ, τ]` by iterating on the second derivative, sampled at
//! Chebyshev points. The interval is shrunk until the contraction and
//! self-map estimates of the existence proof both hold, with the sup-norms of
//! `g_x`, `g_ẋ`, `g_t` estimated by sampling the admissible box.

use std::sync::Arc;

use serde::Serialize;

use super::dense::{ChebSeed, DenseSolution, Segment};
use super::ivp::{Forcing, SingularIVP};
use crate::error::{Error, Result};
use crate::numerics::chebyshev::{lobatto_points, ChebSeries};

/// Upper bound on the contraction coefficient accepted for the seed.
pub const CONTRACTION_BOUND: f64 = 0.9;
/// Ball radius (relative to `|ẍ(0)|`) used when the caller does not choose one.
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const MAX_PICARD_ITERATIONS: usize = 200;

const CHEB_DEGREE: usize = 20;
const INITIAL_TAU: f64 = 0.25;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Serialize)]
pub struct SeedReport {
    pub tau: f64,
    pub epsilon: f64,
    /// Contraction coefficient `ρ(τ, ε)`.
    pub contraction: f64,
    /// Self-map coefficient; must be below 1.
    pub self_map: f64,
    pub iterations: usize,
    /// `sup |ẍ_{k+1} - ẍ_k|` per iteration.
    pub differences: Vec<f64>,
    /// `sup |ẍ - ẍ(0)| / |ẍ(0)|` of the fixed point.
    pub ball_radius: f64,
}

#[derive(Debug, Clone)]
pub struct Seed {
    pub tau: f64,
    pub solution: DenseSolution,
    pub report: SeedReport,
}

struct Norms {
    g_x: f64,
    g_xd: f64,
    g_t: f64,
}

fn sample_norms<F: Forcing>(forcing: &F, tau: f64, x_max: f64, xd_max: f64) -> Option<Norms> {
    const N: usize = 7;
    let mut norms = Norms {
        g_x: 0.0,
        g_xd: 0.0,
        g_t: 0.0,
    };
    let grid = |i: usize, half: f64| -half + 2.0 * half * i as f64 / (N - 1) as f64;
    for i in 0..N {
        let t = grid(i, tau);
        for j in 0..N {
            let x = grid(j, x_max);
            for k in 0..N {
                let xd = grid(k, xd_max);
                let gx = forcing.g_x(t, x, xd).abs();
                let gd = forcing.g_xdot(t, x, xd).abs();
                let gt = forcing.g_t(t, x, xd).abs();
                if !(gx.is_finite() && gd.is_finite() && gt.is_finite()) {
                    return None;
                }
                norms.g_x = norms.g_x.max(gx);
                norms.g_xd = norms.g_xd.max(gd);
                norms.g_t = norms.g_t.max(gt);
            }
        }
    }
    Some(norms)
}

/// Chooses `τ` and returns `(τ, ρ(τ, ε), self-map coefficient)`.
fn choose_tau<F: Forcing>(ivp: &SingularIVP<F>, epsilon: f64) -> Result<(f64, f64, f64)> {
    let lambda_part = 8.0 / 3.0 * ivp.lambda().abs() * ((1.0 + epsilon) / (1.0 - epsilon)).powi(2);
    if lambda_part >= CONTRACTION_BOUND {
        return Err(Error::ContractionFailure {
            iterations: 0,
            last_diff: f64::NAN,
            reason: format!(
                "epsilon = {epsilon} gives a singular-term contraction of {lambda_part:.4} >= {CONTRACTION_BOUND}"
            ),
        });
    }
    let acc0 = ivp.accel_at_origin().abs();
    let mut tau = INITIAL_TAU;
    for _ in 0..MAX_HALVINGS {
        let x_max = 0.5 * (1.0 + epsilon) * acc0 * tau * tau;
        let xd_max = (1.0 + epsilon) * acc0 * tau;
        if let Some(n) = sample_norms(ivp.forcing(), tau, x_max, xd_max) {
            let rho = lambda_part + 0.5 * n.g_x * tau * tau + n.g_xd * tau;
            let a = n.g_t + n.g_xd * acc0;
            let b = 0.5 * n.g_x * acc0;
            let self_map = rho + tau * (a * tau + b) / (epsilon * acc0);
            if rho <= CONTRACTION_BOUND && self_map < 1.0 {
                return Ok((tau, rho, self_map));
            }
        }
        tau *= 0.5;
    }
    Err(Error::ContractionFailure {
        iterations: 0,
        last_diff: f64::NAN,
        reason: "no admissible seed interval found".into(),
    })
}

/// Computes the Picard fixed point on `[-τ, τ]` with ball radius `epsilon`.
/// Iteration stops when `sup |ẍ_{k+1} - ẍ_k| < tol / 10`.
pub fn picard_seed<F: Forcing>(ivp: &SingularIVP<F>, epsilon: f64, tol: f64) -> Result<Seed> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!(
            "epsilon = {epsilon} must lie in (0, 1)"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol = {tol} must be positive")));
    }
    let (tau, contraction, self_map) = choose_tau(ivp, epsilon)?;
    picard_iterate(ivp, tau, epsilon, contraction, self_map, tol)
}

fn picard_iterate<F: Forcing>(
    ivp: &SingularIVP<F>,
    tau: f64,
    epsilon: f64,
    contraction: f64,
    self_map: f64,
    tol: f64,
) -> Result<Seed> {
    let nodes = lobatto_points(CHEB_DEGREE);
    let acc0 = ivp.accel_at_origin();
    let mut values = vec![acc0; nodes.len()];
    let mut differences = Vec::new();
    let lambda = ivp.lambda();

    for iter in 1..=MAX_PICARD_ITERATIONS {
        let cheb = ChebSeed::new(tau, ChebSeries::from_lobatto_values(&values));
        let mut next = Vec::with_capacity(nodes.len());
        for &s in &nodes {
            let t = tau * s;
            let (a, b) = cheb.moments(t);
            if b == 0.0 || !b.is_finite() {
                return Err(Error::ContractionFailure {
                    iterations: iter,
                    last_diff: differences.last().copied().unwrap_or(f64::NAN),
                    reason: format!("iterate lost x ≠ 0 at t = {t}"),
                });
            }
            // λ ẋ²/x = λ (tA)² / (t²B) = λ A²/B
            let v = lambda * a * a / b + ivp.forcing().g(t, t * t * b, t * a);
            next.push(v);
        }
        let diff = next
            .iter()
            .zip(&values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        values = next;
        differences.push(diff);
        if !diff.is_finite() {
            break;
        }
        if diff < 0.1 * tol {
            let series = ChebSeries::from_lobatto_values(&values);
            let cheb = Arc::new(ChebSeed::new(tau, series));
            let ball_radius = values
                .iter()
                .map(|v| (v - acc0).abs() / acc0.abs())
                .fold(0.0, f64::max);
            let solution =
                DenseSolution::from_parts(vec![-tau, tau], vec![Segment::Seed(cheb)]);
            return Ok(Seed {
                tau,
                solution,
                report: SeedReport {
                    tau,
                    epsilon,
                    contraction,
                    self_map,
                    iterations: iter,
                    differences,
                    ball_radius,
                },
            });
        }
    }
    Err(Error::ContractionFailure {
        iterations: differences.len(),
        last_diff: differences.last().copied().unwrap_or(f64::NAN),
        reason: "tolerance not reached".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::ivp::{ClosureForcing, ConstantForcing};

    #[test]
    fn constant_forcing_gives_exact_parabola() {
        // ẍ = -¼ẋ²/x + 3/2 is solved by x = t²/2
        let ivp = SingularIVP::new(-0.25, ConstantForcing(1.5)).unwrap();
        let seed = picard_seed(&ivp, DEFAULT_EPSILON, 1e-12).unwrap();
        for t in [-seed.tau, -0.3 * seed.tau, 0.0, 0.7 * seed.tau, seed.tau] {
            let s = seed.solution.eval(t).unwrap();
            assert!((s.x - 0.5 * t * t).abs() < 1e-16);
            assert!((s.xd - t).abs() < 1e-15);
            assert!((s.xdd - 1.0).abs() < 1e-14);
        }
        assert!(seed.report.iterations <= 2);
    }

    #[test]
    fn epsilon_too_large_fails() {
        let ivp = SingularIVP::new(0.37, ConstantForcing(1.0)).unwrap();
        let r = picard_seed(&ivp, 0.99, 1e-10);
        assert!(matches!(r, Err(Error::ContractionFailure { .. })));
        // the default radius is fine for λ = -1/4 but ε = 0.1 is not
        let ivp = SingularIVP::new(-0.25, ConstantForcing(1.0)).unwrap();
        assert!(picard_seed(&ivp, 0.1, 1e-10).is_err());
        assert!(picard_seed(&ivp, DEFAULT_EPSILON, 1e-10).is_ok());
    }

    #[test]
    fn seed_respects_selection_bounds_and_converges_geometrically() {
        // g = 1 + t + x - ẋ, a nonconstant smooth forcing
        let ivp = SingularIVP::new(
            -0.25,
            ClosureForcing {
                g: |t: f64, x: f64, xd: f64| 1.0 + t + x - xd,
                g_x: |_, _, _| 1.0,
                g_xdot: |_, _, _| -1.0,
            },
        )
        .unwrap();
        let seed = picard_seed(&ivp, DEFAULT_EPSILON, 1e-10).unwrap();
        let r = &seed.report;
        assert!(r.contraction <= CONTRACTION_BOUND);
        assert!(r.self_map < 1.0);
        assert!(r.ball_radius <= r.epsilon);
        let s0 = seed.solution.eval(0.0).unwrap();
        assert_eq!(s0.x, 0.0);
        assert_eq!(s0.xd, 0.0);
        assert!((s0.xdd - ivp.accel_at_origin()).abs() < 1e-10);
        // successive differences shrink at least by the contraction bound
        for w in r.differences.windows(2).skip(1) {
            if w[1] > 1e-15 {
                assert!(w[1] <= r.contraction * w[0] + 1e-15, "{:?}", r.differences);
            }
        }
        // residual of the ODE away from t = 0
        for t in [-seed.tau, -0.5 * seed.tau, 0.4 * seed.tau, seed.tau] {
            let s = seed.solution.eval(t).unwrap();
            let res = s.xdd - ivp.rhs(t, s.x, s.xd);
            assert!(res.abs() < 1e-10, "residual {res} at {t}");
        }
    }
}
