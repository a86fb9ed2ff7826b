//! Direct evaluation of `∫_Ω 1/(1 + |∇u|²) dx` over the unit disk for a body
//! given by its height function. Independent of the conjugate-space pipeline.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Finite-difference step for the gradient.
pub const GRADIENT_STEP: f64 = 1e-5;
/// Default number of radial and angular cells.
pub const DEFAULT_RESOLUTION: usize = 800;

/// A height function `u(x₁, x₂)` on the closed unit disk.
pub trait HeightField: Sync {
    fn height(&self, x1: f64, x2: f64) -> Result<f64>;
}

impl<F> HeightField for F
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    fn height(&self, x1: f64, x2: f64) -> Result<f64> {
        self(x1, x2)
    }
}

fn inside(x1: f64, x2: f64) -> bool {
    x1 * x1 + x2 * x2 <= 1.0
}

/// One partial derivative: central where both neighbours are in the disk,
/// otherwise a second-order one-sided stencil pointing inward.
fn partial<B: HeightField + ?Sized>(body: &B, x1: f64, x2: f64, e: (f64, f64)) -> Result<f64> {
    let h = GRADIENT_STEP;
    let at = |s: f64| body.height(x1 + s * e.0, x2 + s * e.1);
    let fwd = inside(x1 + h * e.0, x2 + h * e.1);
    let bwd = inside(x1 - h * e.0, x2 - h * e.1);
    if fwd && bwd {
        Ok((at(h)? - at(-h)?) / (2.0 * h))
    } else if bwd {
        Ok((3.0 * at(0.0)? - 4.0 * at(-h)? + at(-2.0 * h)?) / (2.0 * h))
    } else if fwd {
        Ok((-3.0 * at(0.0)? + 4.0 * at(h)? - at(2.0 * h)?) / (2.0 * h))
    } else {
        Err(Error::Evaluation(format!(
            "no gradient stencil fits in the disk at ({x1}, {x2})"
        )))
    }
}

fn integrand<B: HeightField + ?Sized>(body: &B, x1: f64, x2: f64) -> Result<f64> {
    let g1 = partial(body, x1, x2, (1.0, 0.0))?;
    let g2 = partial(body, x1, x2, (0.0, 1.0))?;
    Ok(1.0 / (1.0 + g1 * g1 + g2 * g2))
}

/// Midpoint rule on an `n × n` polar grid over the angular range
/// `[0, θ_max]`.
fn polar_midpoint<B: HeightField + ?Sized>(body: &B, n: usize, theta_max: f64) -> Result<f64> {
    let dr = 1.0 / n as f64;
    let dt = theta_max / n as f64;
    let rows: Result<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let r = (i as f64 + 0.5) * dr;
            let mut acc = 0.0;
            for j in 0..n {
                let th = (j as f64 + 0.5) * dt;
                acc += integrand(body, r * th.cos(), r * th.sin())?;
            }
            Ok(acc * r * dr * dt)
        })
        .collect();
    // fixed-order sum keeps the result independent of the thread count
    Ok(rows?.iter().sum())
}

/// `∫_Ω 1/(1 + |∇u|²) dx`: Richardson extrapolation of the `n × n` and
/// `n/2 × n/2` polar midpoint sums.
pub fn resistance_direct<B: HeightField + ?Sized>(body: &B, n: usize) -> Result<f64> {
    richardson(body, n, 2.0 * PI, 1.0)
}

/// As [`resistance_direct`] for bodies symmetric under `x₂ → −x₂`:
/// integrates the upper half-disk and doubles it.
pub fn resistance_direct_symmetric<B: HeightField + ?Sized>(body: &B, n: usize) -> Result<f64> {
    richardson(body, n, PI, 2.0)
}

fn richardson<B: HeightField + ?Sized>(body: &B, n: usize, theta_max: f64, factor: f64) -> Result<f64> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("resolution {n} must be >= 4")));
    }
    let fine = polar_midpoint(body, n, theta_max)?;
    let coarse = polar_midpoint(body, n / 2, theta_max)?;
    Ok(factor * (4.0 * fine - coarse) / 3.0)
}
