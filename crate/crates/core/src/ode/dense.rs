//! Piecewise-polynomial trajectories with value, first, second and third
//! derivative evaluation.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::chebyshev::ChebSeries;

/// A point on a trajectory: `x(t)` and its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub t: f64,
    pub x: f64,
    pub xd: f64,
    pub xdd: f64,
}

/// Second-derivative field of the Picard seed on `[-tau, tau]`.
///
/// `x` and `xd` are recovered from `xdd` through `x = t² ∫₀¹ (1-u) ẍ(tu) du`
/// and `ẋ = t ∫₀¹ ẍ(tu) du`, which keeps full relative accuracy near `t = 0`.
#[derive(Debug, Clone)]
pub struct ChebSeed {
    pub(crate) tau: f64,
    pub(crate) xdd: ChebSeries,
    pub(crate) xddd: ChebSeries,
    gl_nodes: Vec<f64>,
    gl_weights: Vec<f64>,
}

impl ChebSeed {
    pub(crate) fn new(tau: f64, xdd: ChebSeries) -> Self {
        let degree = xdd.coeffs().len();
        let (nodes, weights) = crate::numerics::quadrature::gauss_legendre(degree / 2 + 3);
        // map to [0, 1]
        let gl_nodes = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let gl_weights = weights.iter().map(|w| 0.5 * w).collect();
        let xddd = xdd.derivative();
        Self {
            tau,
            xdd,
            xddd,
            gl_nodes,
            gl_weights,
        }
    }

    /// `(∫₀¹ ẍ(tu) du, ∫₀¹ (1-u) ẍ(tu) du)`.
    pub(crate) fn moments(&self, t: f64) -> (f64, f64) {
        let s = t / self.tau;
        let mut a = 0.0;
        let mut b = 0.0;
        for (&u, &w) in self.gl_nodes.iter().zip(&self.gl_weights) {
            let v = self.xdd.eval(s * u);
            a += w * v;
            b += w * (1.0 - u) * v;
        }
        (a, b)
    }

    pub(crate) fn state(&self, t: f64) -> State {
        let (a, b) = self.moments(t);
        State {
            t,
            x: t * t * b,
            xd: t * a,
            xdd: self.xdd.eval(t / self.tau),
        }
    }

    pub(crate) fn third(&self, t: f64) -> f64 {
        self.xddd.eval(t / self.tau) / self.tau
    }

    pub(crate) fn fourth(&self, t: f64) -> f64 {
        self.xddd.derivative().eval(t / self.tau) / (self.tau * self.tau)
    }
}

/// Quintic Hermite segment stored as a polynomial in `s = (t - t0) / h`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Hermite5 {
    t0: f64,
    h: f64,
    c: [f64; 6],
}

impl Hermite5 {
    pub(crate) fn new(a: &State, b: &State) -> Self {
        let h = b.t - a.t;
        let c0 = a.x;
        let c1 = h * a.xd;
        let c2 = 0.5 * h * h * a.xdd;
        let r0 = b.x - (c0 + c1 + c2);
        let r1 = h * b.xd - (c1 + 2.0 * c2);
        let r2 = h * h * b.xdd - 2.0 * c2;
        let c3 = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
        let c4 = -15.0 * r0 + 7.0 * r1 - r2;
        let c5 = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
        Self {
            t0: a.t,
            h,
            c: [c0, c1, c2, c3, c4, c5],
        }
    }

    fn state(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let c = &self.c;
        let x = c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
        let d1 = c[1] + s * (2.0 * c[2] + s * (3.0 * c[3] + s * (4.0 * c[4] + s * 5.0 * c[5])));
        let d2 = 2.0 * c[2] + s * (6.0 * c[3] + s * (12.0 * c[4] + s * 20.0 * c[5]));
        State {
            t,
            x,
            xd: d1 / self.h,
            xdd: d2 / (self.h * self.h),
        }
    }

    fn third(&self, t: f64) -> f64 {
        let s = (t - self.t0) / self.h;
        let c = &self.c;
        (6.0 * c[3] + s * (24.0 * c[4] + s * 60.0 * c[5])) / self.h.powi(3)
    }

    fn fourth(&self, t: f64) -> f64 {
        let s = (t - self.t0) / self.h;
        (24.0 * self.c[4] + 120.0 * s * self.c[5]) / self.h.powi(4)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Segment {
    Seed(Arc<ChebSeed>),
    Hermite(Hermite5),
}

impl Segment {
    fn state(&self, t: f64) -> State {
        match self {
            Segment::Seed(s) => s.state(t),
            Segment::Hermite(h) => h.state(t),
        }
    }

    fn third(&self, t: f64) -> f64 {
        match self {
            Segment::Seed(s) => s.third(t),
            Segment::Hermite(h) => h.third(t),
        }
    }

    fn fourth(&self, t: f64) -> f64 {
        match self {
            Segment::Seed(s) => s.fourth(t),
            Segment::Hermite(h) => h.fourth(t),
        }
    }
}

/// A solved trajectory on a closed interval `[lo, hi]`.
///
/// Breakpoints are ascending; segment `i` covers `[breakpoints[i],
/// breakpoints[i+1]]`. Evaluation outside the domain is an error.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl DenseSolution {
    pub(crate) fn from_parts(breakpoints: Vec<f64>, segments: Vec<Segment>) -> Self {
        debug_assert_eq!(breakpoints.len(), segments.len() + 1);
        debug_assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        Self {
            breakpoints,
            segments,
        }
    }

    /// Builds a quintic Hermite interpolant through states sorted in either
    /// direction.
    pub(crate) fn from_states(states: &[State]) -> Self {
        let mut sorted: Vec<State> = states.to_vec();
        sorted.sort_by(|a, b| a.t.total_cmp(&b.t));
        sorted.dedup_by(|a, b| a.t == b.t);
        let breakpoints = sorted.iter().map(|s| s.t).collect();
        let segments = sorted
            .windows(2)
            .map(|w| Segment::Hermite(Hermite5::new(&w[0], &w[1])))
            .collect();
        Self::from_parts(breakpoints, segments)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.domain();
        t >= lo && t <= hi
    }

    fn locate(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        Ok(idx.saturating_sub(1).min(self.segments.len() - 1))
    }

    pub fn eval(&self, t: f64) -> Result<State> {
        let i = self.locate(t)?;
        Ok(self.segments[i].state(t))
    }

    /// Third derivative of the interpolant.
    pub fn third_derivative(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        Ok(self.segments[i].third(t))
    }

    /// Fourth derivative of the interpolant (meaningful on the seed segment).
    pub fn fourth_derivative(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        Ok(self.segments[i].fourth(t))
    }

    /// Restricts the domain to `[lo, hi]`.
    pub(crate) fn restrict(&self, lo: f64, hi: f64) -> Self {
        let mut bps = Vec::new();
        let mut segs = Vec::new();
        bps.push(lo);
        for (i, seg) in self.segments.iter().enumerate() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            if b <= lo || a >= hi {
                continue;
            }
            segs.push(seg.clone());
            bps.push(b.min(hi));
        }
        Self::from_parts(bps, segs)
    }

    /// Joins two solutions meeting at a common breakpoint.
    pub(crate) fn concat(left: Self, right: Self) -> Self {
        let (_, lhi) = left.domain();
        let (rlo, _) = right.domain();
        debug_assert!((lhi - rlo).abs() <= 1e-14 * (1.0 + lhi.abs()));
        let mut bps = left.breakpoints;
        let mut segs = left.segments;
        bps.extend_from_slice(&right.breakpoints[1..]);
        segs.extend(right.segments);
        Self::from_parts(bps, segs)
    }

    /// Samples `n >= 2` equally spaced points across the domain.
    pub fn samples(&self, n: usize) -> Vec<State> {
        let (lo, hi) = self.domain();
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let t = if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                };
                self.eval(t).expect("sample inside domain")
            })
            .collect()
    }

    pub fn to_record(&self, n: usize) -> DenseRecord {
        DenseRecord {
            domain: self.domain(),
            breakpoints: self.breakpoints.clone(),
            samples: self
                .samples(n)
                .into_iter()
                .map(|s| (s.t, s.x, s.xd))
                .collect(),
        }
    }
}

/// Serializable view of a [`DenseSolution`].
#[derive(Debug, Clone, Serialize)]
pub struct DenseRecord {
    pub domain: (f64, f64),
    pub breakpoints: Vec<f64>,
    pub samples: Vec<(f64, f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_state(t: f64) -> State {
        // x = t^5 - 2t^3 + t
        State {
            t,
            x: t.powi(5) - 2.0 * t.powi(3) + t,
            xd: 5.0 * t.powi(4) - 6.0 * t * t + 1.0,
            xdd: 20.0 * t.powi(3) - 12.0 * t,
        }
    }

    #[test]
    fn hermite_reproduces_quintics() {
        let states: Vec<State> = [-1.0, -0.2, 0.5, 1.3].iter().map(|&t| poly_state(t)).collect();
        let sol = DenseSolution::from_states(&states);
        for t in [-0.9, -0.2, 0.1, 0.77, 1.3] {
            let s = sol.eval(t).unwrap();
            let e = poly_state(t);
            assert!((s.x - e.x).abs() < 1e-12);
            assert!((s.xd - e.xd).abs() < 1e-11);
            assert!((s.xdd - e.xdd).abs() < 1e-10);
            assert!((sol.third_derivative(t).unwrap() - (60.0 * t * t - 12.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn evaluation_outside_domain_is_error() {
        let states: Vec<State> = [0.0, 1.0].iter().map(|&t| poly_state(t)).collect();
        let sol = DenseSolution::from_states(&states);
        assert!(matches!(sol.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(sol.eval(-1e-9), Err(Error::OutOfDomain { .. })));
        assert!(sol.eval(1.0).is_ok());
    }

    #[test]
    fn restrict_and_concat_keep_values() {
        let states: Vec<State> = (0..=10).map(|i| poly_state(i as f64 * 0.1)).collect();
        let sol = DenseSolution::from_states(&states);
        let left = sol.restrict(0.0, 0.45);
        let right = sol.restrict(0.45, 1.0);
        assert_eq!(left.domain(), (0.0, 0.45));
        let joined = DenseSolution::concat(left, right);
        for t in [0.05, 0.44, 0.45, 0.46, 0.99] {
            assert!((joined.eval(t).unwrap().x - sol.eval(t).unwrap().x).abs() < 1e-15);
        }
    }
}
