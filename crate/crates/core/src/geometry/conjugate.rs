//! The section of the body by its symmetry plane: the conjugate
//! `v*(x₁) = sup_p (p x₁ − v(p))` of the reflected, line-extended extremal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::ExtremalSolution;
use crate::numerics::golden_max;

/// `v` reflected to `p < 0` and continued by `|p|` beyond `p₀`.
pub fn extended_v(sol: &ExtremalSolution, p: f64) -> Result<f64> {
    let a = p.abs();
    if a >= sol.p0 {
        Ok(a)
    } else {
        sol.v(a)
    }
}

/// The maximizing `p` in the definition of `v*(x₁)` for `x₁ ≥ 0`, i.e. the
/// right derivative of `v*`.
pub fn conjugate_slope(sol: &ExtremalSolution, x1: f64) -> Result<f64> {
    check_x1(x1)?;
    let s = x1.abs();
    let p = if s < sol.slope0 { 0.0 } else { sol.p_of_slope(s)? };
    Ok(p.copysign(x1))
}

/// `v*(x₁)` for `x₁ ∈ [−1, 1]`.
pub fn conjugate_value(sol: &ExtremalSolution, x1: f64) -> Result<f64> {
    check_x1(x1)?;
    let s = x1.abs();
    if s <= sol.slope0 {
        return Ok(-sol.M);
    }
    let p = sol.p_of_slope(s)?;
    Ok(p * s - sol.v(p)?)
}

fn check_x1(x1: f64) -> Result<()> {
    if !(x1.abs() <= 1.0) {
        return Err(Error::Domain(format!("x1 = {x1} outside [-1, 1]")));
    }
    Ok(())
}

/// `(v*)*(p) = sup_{|x₁| ≤ 1} (p x₁ − v*(x₁))`.
pub fn biconjugate(sol: &ExtremalSolution, p: f64) -> Result<f64> {
    let mut failure = None;
    let (_, value) = golden_max(
        |x| match conjugate_value(sol, x) {
            Ok(z) => p * x - z,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        -1.0,
        1.0,
        1e-11,
        200,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Samples of `v*` on `[−1, 1]` with the corner data of the curve.
#[derive(Debug, Clone, Serialize)]
pub struct MaxwellCurve {
    /// `(x₁, v*(x₁))`
    pub samples: Vec<(f64, f64)>,
    /// Half the length of the flat bottom, `v'(0⁺)`.
    pub flat_half_width: f64,
    /// Jump of `(v*)'` at `x₁ = ±v'(0⁺)`, equal to `r`.
    pub corner_jump: f64,
    /// `|(v*)'(±1 ∓ 0)|`, equal to `p₀`.
    pub edge_slope: f64,
    pub height: f64,
}

/// `v*` on `n` equispaced points of `[−1, 1]`.
pub fn conjugate_profile(sol: &ExtremalSolution, n: usize) -> Result<MaxwellCurve> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {n}")));
    }
    let samples = (0..n)
        .map(|i| {
            let x = (-1.0 + 2.0 * i as f64 / (n - 1) as f64).clamp(-1.0, 1.0);
            Ok((x, conjugate_value(sol, x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MaxwellCurve {
        samples,
        flat_half_width: sol.slope0,
        corner_jump: sol.r,
        edge_slope: sol.p0,
        height: sol.M,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::solve_for_p0;
    use crate::ode::DEFAULT_TOL;

    #[test]
    fn flat_bottom_and_ends() {
        let sol = solve_for_p0(5.0, DEFAULT_TOL).unwrap();
        assert_eq!(conjugate_value(&sol, 0.0).unwrap(), -sol.M);
        assert_eq!(conjugate_value(&sol, -0.5 * sol.slope0).unwrap(), -sol.M);
        assert!(conjugate_value(&sol, 1.0).unwrap().abs() < 1e-14);
        assert!(conjugate_value(&sol, -1.0).unwrap().abs() < 1e-14);
        assert!(conjugate_value(&sol, 1.5).is_err());
    }

    #[test]
    fn corner_facts_by_differences() {
        let sol = solve_for_p0(5.0, DEFAULT_TOL).unwrap();
        let s = sol.slope0;
        let h = 1e-6;
        let right = (conjugate_value(&sol, s + h).unwrap() - conjugate_value(&sol, s).unwrap()) / h;
        assert!((right - sol.r).abs() < 1e-4, "{right} vs {}", sol.r);
        let left = (conjugate_value(&sol, 1.0).unwrap() - conjugate_value(&sol, 1.0 - h).unwrap()) / h;
        assert!((left - sol.p0).abs() < 1e-4, "{left} vs {}", sol.p0);
        assert_eq!(conjugate_slope(&sol, 0.5 * s).unwrap(), 0.0);
        assert!((conjugate_slope(&sol, -1.0).unwrap() + sol.p0).abs() < 1e-12);
    }

    #[test]
    fn biconjugate_recovers_v() {
        let sol = solve_for_p0(3.0, DEFAULT_TOL).unwrap();
        for i in 0..=10 {
            let p = sol.p0 * i as f64 / 10.0;
            let back = biconjugate(&sol, p).unwrap();
            assert!((back - sol.v(p).unwrap()).abs() < 1e-7, "{p}");
        }
        // the line extension beyond p₀
        assert!((biconjugate(&sol, 4.0).unwrap() - 4.0).abs() < 1e-7);
    }

    #[test]
    fn profile_is_convex() {
        let sol = solve_for_p0(4.0, DEFAULT_TOL).unwrap();
        let c = conjugate_profile(&sol, 201).unwrap();
        assert_eq!(c.samples.len(), 201);
        for w in c.samples.windows(3) {
            assert!(w[1].1 <= 0.5 * (w[0].1 + w[2].1) + 1e-12);
        }
        assert!(conjugate_profile(&sol, 1).is_err());
    }
}
