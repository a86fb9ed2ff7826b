use crate::error::{Error, Result};

/// Smooth part `g(t, x, ẋ)` of `ẍ = λ ẋ²/x + g(t, x, ẋ)` with its partials.
pub trait Forcing {
    fn g(&self, t: f64, x: f64, xd: f64) -> f64;
    fn g_x(&self, t: f64, x: f64, xd: f64) -> f64;
    fn g_xdot(&self, t: f64, x: f64, xd: f64) -> f64;

    /// Partial in `t`. Only used to size the seed interval.
    fn g_t(&self, t: f64, x: f64, xd: f64) -> f64 {
        let h = 1e-6 * (1.0 + t.abs());
        (self.g(t + h, x, xd) - self.g(t - h, x, xd)) / (2.0 * h)
    }
}

/// Forcing assembled from closures, mostly for tests and ad-hoc problems.
pub struct ClosureForcing<G, Gx, Gd> {
    pub g: G,
    pub g_x: Gx,
    pub g_xdot: Gd,
}

impl<G, Gx, Gd> Forcing for ClosureForcing<G, Gx, Gd>
where
    G: Fn(f64, f64, f64) -> f64,
    Gx: Fn(f64, f64, f64) -> f64,
    Gd: Fn(f64, f64, f64) -> f64,
{
    fn g(&self, t: f64, x: f64, xd: f64) -> f64 {
        (self.g)(t, x, xd)
    }
    fn g_x(&self, t: f64, x: f64, xd: f64) -> f64 {
        (self.g_x)(t, x, xd)
    }
    fn g_xdot(&self, t: f64, x: f64, xd: f64) -> f64 {
        (self.g_xdot)(t, x, xd)
    }
}

/// Constant forcing `g ≡ c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantForcing(pub f64);

impl Forcing for ConstantForcing {
    fn g(&self, _: f64, _: f64, _: f64) -> f64 {
        self.0
    }
    fn g_x(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn g_xdot(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn g_t(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
}

/// Initial value problem `ẍ = λ ẋ²/x + g(t, x, ẋ)`, `x(0) = 0`, whose
/// solution leaves the origin with `ẋ(0) = 0`.
#[derive(Debug, Clone)]
pub struct SingularIVP<F> {
    lambda: f64,
    forcing: F,
    g_origin: f64,
}

impl<F: Forcing> SingularIVP<F> {
    /// Requires `0 < |λ| < 3/8` and `g(0,0,0) ≠ 0`.
    pub fn new(lambda: f64, forcing: F) -> Result<Self> {
        if !(lambda != 0.0 && lambda.abs() < 0.375) {
            return Err(Error::InvalidInput(format!(
                "lambda = {lambda} must satisfy 0 < |lambda| < 3/8"
            )));
        }
        let g_origin = forcing.g(0.0, 0.0, 0.0);
        if !g_origin.is_finite() || g_origin == 0.0 {
            return Err(Error::InvalidInput(format!(
                "g(0,0,0) = {g_origin} must be finite and nonzero"
            )));
        }
        Ok(Self {
            lambda,
            forcing,
            g_origin,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn forcing(&self) -> &F {
        &self.forcing
    }

    pub fn g_origin(&self) -> f64 {
        self.g_origin
    }

    /// Full right-hand side `λ ẋ²/x + g`.
    pub fn rhs(&self, t: f64, x: f64, xd: f64) -> f64 {
        self.lambda * xd * xd / x + self.forcing.g(t, x, xd)
    }

    /// `ẍ(0) = g(0,0,0) / (1 - 2λ)`.
    pub fn accel_at_origin(&self) -> f64 {
        self.g_origin / (1.0 - 2.0 * self.lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_checks_hypotheses() {
        assert!(SingularIVP::new(0.0, ConstantForcing(1.0)).is_err());
        assert!(SingularIVP::new(0.375, ConstantForcing(1.0)).is_err());
        assert!(SingularIVP::new(-0.4, ConstantForcing(1.0)).is_err());
        assert!(SingularIVP::new(-0.25, ConstantForcing(0.0)).is_err());
        assert!(SingularIVP::new(-0.25, ConstantForcing(f64::NAN)).is_err());
        assert!(SingularIVP::new(0.37, ConstantForcing(1.0)).is_ok());
    }

    #[test]
    fn accel_at_origin_constant_forcing() {
        let ivp = SingularIVP::new(-0.25, ConstantForcing(1.5)).unwrap();
        assert_eq!(ivp.accel_at_origin(), 1.0);
    }

    #[test]
    fn default_g_t_is_central_difference() {
        let f = ClosureForcing {
            g: |t: f64, _x: f64, _d: f64| t * t,
            g_x: |_, _, _| 0.0,
            g_xdot: |_, _, _| 0.0,
        };
        assert!((f.g_t(0.5, 0.0, 0.0) - 1.0).abs() < 1e-8);
    }
}
