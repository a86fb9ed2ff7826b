//! The Lagrangian of the key problem and the resistance functional.

pub mod direct;
pub mod lagrangian;
pub mod value;

pub use direct::{resistance_direct, resistance_direct_symmetric, HeightField};
pub use lagrangian::{euler_lagrange_defect, f_eval, pmp_derivatives, LagrangianPoint, Partial};
pub use value::{gamma_form_j, j_scaled, j_unscaled};
