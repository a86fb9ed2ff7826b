use std::sync::OnceLock;

use proptest::prelude::*;

use minres::extremal::{assemble_profile, solve_for_p0, unscale, ExtremalSolution};
use minres::functional::{j_scaled, j_unscaled};
use minres::geometry::{conjugate_value, BodyEvaluator};
use minres::ode::{integrate_variational, VariationalCoeffs, DEFAULT_TOL};

fn body_solution() -> &'static ExtremalSolution {
    static SOL: OnceLock<ExtremalSolution> = OnceLock::new();
    SOL.get_or_init(|| solve_for_p0(5.0, DEFAULT_TOL).unwrap())
}

fn disk_point(r: f64, th: f64) -> (f64, f64) {
    (r.sqrt() * th.cos(), r.sqrt() * th.sin())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn variational_solve_is_additive(y1 in -2.0..2.0f64, y2 in -2.0..2.0f64, s1 in -1.0..1.0f64, s2 in -1.0..1.0f64) {
        let a = |t: f64| 0.3 + 0.2 * t;
        let b = |t: f64| -0.1 + 0.5 * t * t;
        let solve = |y: f64, s: f64| {
            let c = VariationalCoeffs::new(-0.25, a, b, move |t: f64| s * (1.0 + t)).unwrap();
            integrate_variational(&c, y, -1.0, 1e-10).unwrap()
        };
        let (u, v, w) = (solve(y1, s1), solve(y2, s2), solve(y1 + y2, s1 + s2));
        for k in 0..=20 {
            let t = -(k as f64) / 20.0;
            let sum = u.eval(t).unwrap().x + v.eval(t).unwrap().x;
            prop_assert!((w.eval(t).unwrap().x - sum).abs() < 1e-8);
        }
    }

    #[test]
    fn body_is_convex_along_chords(r1 in 0.0..1.0f64, t1 in 0.0..6.3f64, r2 in 0.0..1.0f64, t2 in 0.0..6.3f64) {
        let body = BodyEvaluator::new(body_solution());
        let (a, b) = (disk_point(r1, t1), disk_point(r2, t2));
        let mid = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
        let ua = body.evaluate(a.0, a.1).unwrap();
        let ub = body.evaluate(b.0, b.1).unwrap();
        let um = body.evaluate(mid.0, mid.1).unwrap();
        prop_assert!(um <= 0.5 * (ua + ub) + 1e-9);
        prop_assert!(um >= -body_solution().M - 1e-12 && um <= 0.0);
    }

    #[test]
    fn section_is_the_maxwell_curve(x1 in -1.0..1.0f64) {
        let sol = body_solution();
        let u = BodyEvaluator::new(sol).evaluate(x1, 0.0).unwrap();
        prop_assert!((u - conjugate_value(sol, x1).unwrap()).abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn unscaling_preserves_the_functional(alpha in 0.001..0.3f64) {
        let prof = assemble_profile(alpha, DEFAULT_TOL).unwrap();
        let bracket = j_scaled(&prof).unwrap();
        let sol = unscale(prof, 1.0 / alpha.sqrt()).unwrap();
        let direct = j_unscaled(&sol).unwrap();
        prop_assert!((direct - alpha * bracket).abs() < 1e-8 * (1.0 + direct.abs()));
        for k in 0..10 {
            let p = sol.p0 * k as f64 / 9.0;
            let lhs = sol.v(p).unwrap();
            let rhs = sol.p0 * sol.profile.kappa(p / sol.p0).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-14 * (1.0 + rhs));
        }
    }
}
