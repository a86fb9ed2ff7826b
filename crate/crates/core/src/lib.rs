//! Newton's minimal resistance problem in the class of developable bodies.

pub mod error;
pub mod extremal;
pub mod functional;
pub mod geometry;
pub mod numerics;
pub mod ode;

pub use error::{Error, Result};
