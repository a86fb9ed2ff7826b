//! The bang–singular extremal of the key problem: singular arc, switching
//! point, assembly, unscaling and the necessary-condition checks.

pub mod checks;
pub mod newton;
pub mod profile;
pub mod switching;

pub use checks::{
    abel_residual, adjoint_omega, euler_lagrange_residual, euler_lagrange_residual_from_partials, field_jacobian_check, jacobi_check,
    omega_at, omega_prime_at, AdjointProfile, FieldReport, JacobiSolution,
};
pub use newton::{
    nu_derivatives_at_one, solve_nu, solve_nu_to, solve_v, v_second_at_end, v_third_at_end,
    ArcPoint, NewtonForcing, SingularArc, NEWTON_LAMBDA,
};
pub use profile::{
    assemble_profile, assemble_profile_near, check_alpha, limit_constants, solve_for_height,
    solve_for_p0, unscale, ExtremalRecord, ExtremalSolution, LimitConstants, ProfileRecord,
    ScaledProfile, ALPHA_MAX,
};
pub use switching::{find_switch, find_switch_near, switch_roots, I_closed_form_alpha0, I_of, AffinePart};
