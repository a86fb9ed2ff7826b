use minres::extremal::switching::endpoint_integral_closed_form;
use minres::extremal::{
    nu_derivatives_at_one, solve_nu, solve_v, v_second_at_end, v_third_at_end, I_of,
};
use minres::ode::DEFAULT_TOL;

/// Frozen bound for `sup_q |ν''(q, α) − ν''(q, α')| / |α − α'|` on
/// `α, α' ∈ [0, 0.1]`; the measured value is about 14.2.
const CONTINUITY_BOUND: f64 = 30.0;

#[test]
fn second_derivative_depends_lipschitz_on_alpha() {
    let alphas: Vec<f64> = (0..=10).map(|i| 0.01 * i as f64).collect();
    let arcs: Vec<_> = alphas.iter().map(|&a| solve_nu(a, DEFAULT_TOL).unwrap()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            let mut sup: f64 = 0.0;
            for k in 0..=500 {
                let q = k as f64 / 500.0;
                let d = arcs[i].eval(q).unwrap().vpp - arcs[j].eval(q).unwrap().vpp;
                sup = sup.max(d.abs());
            }
            worst = worst.max(sup / (alphas[j] - alphas[i]));
        }
    }
    assert!(worst < CONTINUITY_BOUND, "{worst}");
    assert!(worst > 1.0, "{worst}");
}

#[test]
fn taylor_data_at_the_right_end() {
    for alpha in [0.0, 0.01, 0.1] {
        let nu = solve_nu(alpha, DEFAULT_TOL).unwrap();
        let d = nu_derivatives_at_one(alpha, 3);
        assert!((d[2] - (3.0 - alpha) / (3.0 * (1.0 + alpha))).abs() < 1e-15);
        assert!((nu.eval(1.0).unwrap().vpp - d[2]).abs() < 1e-6);
        assert!((nu.third_derivative(1.0).unwrap() - d[3]).abs() < 1e-6);
        // a one-sided difference of ν'' sees the same third derivative
        let h = 1e-5;
        let fd = (nu.eval(1.0).unwrap().vpp - nu.eval(1.0 - h).unwrap().vpp) / h;
        assert!((fd - d[3]).abs() < 1e-4, "{alpha}: {fd} vs {}", d[3]);
    }
    for p0 in [2.0, 5.0, 10.0] {
        let v = solve_v(p0, DEFAULT_TOL).unwrap();
        assert!((v.eval(p0).unwrap().vpp - v_second_at_end(p0)).abs() < 1e-6);
        assert!((v.third_derivative(p0).unwrap() - v_third_at_end(p0)).abs() < 1e-6);
    }
}

#[test]
fn switching_function_near_the_right_end() {
    for alpha in [0.05, 0.1, 0.2] {
        let nu = solve_nu(alpha, DEFAULT_TOL).unwrap();
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&d: &f64| I_of(1.0 - d, &nu).unwrap() / d.sqrt())
            .collect();
        assert!(ratios.iter().all(|&r| r > 0.0));
        let steps: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(steps[1] < steps[0] && steps[2] < steps[1], "{alpha}: {ratios:?}");
        assert!(steps[2] < 1e-2 * ratios[3]);
        // same sign as the closed-form integral for alpha < 1/3
        assert!(endpoint_integral_closed_form(alpha) > 0.0);
    }
}
