//! Quadrature, root finding and Chebyshev series.

pub mod chebyshev;
pub mod quadrature;
pub mod roots;

pub use quadrature::{gauss_legendre, integrate, integrate_fn, QuadResult, QuadTol};
pub use roots::{brent, golden_max, RootTol};
