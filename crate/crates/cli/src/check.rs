//! The verification suite behind `minres check`.

use rayon::prelude::*;
use serde::Serialize;

use minres::extremal::switching::{endpoint_integral_closed_form, endpoint_integral_quadrature};
use minres::extremal::{
    abel_residual, adjoint_omega, assemble_profile, check_alpha, euler_lagrange_residual,
    field_jacobian_check, jacobi_check, solve_for_height, solve_nu, I_closed_form_alpha0, I_of,
    ScaledProfile, ALPHA_MAX,
};
use minres::functional::resistance_direct_symmetric;
use minres::geometry::BodyEvaluator;
use minres::Result;

/// Shift applied to the switching point by `--inject-fault`.
const FAULT_SHIFT: f64 = 1e-2;

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Verdict {
    fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: value < threshold,
            value,
            threshold,
            detail: None,
        }
    }

    fn failed(name: &str, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            pass: false,
            value: f64::NAN,
            threshold,
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaReport {
    pub alpha: f64,
    pub rho: f64,
    pub checks: Vec<Verdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub pass: bool,
    pub fault_injected: bool,
    pub cases: Vec<AlphaReport>,
    pub identities: Vec<Verdict>,
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let line = |s: &mut String, v: &Verdict| {
            s.push_str(&format!(
                "  {:<4} {:<28} {:>14.6e}  (threshold {:.1e}){}\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                v.value,
                v.threshold,
                v.detail.as_deref().map(|d| format!(" {d}")).unwrap_or_default()
            ))
        };
        for case in &self.cases {
            s.push_str(&format!("alpha = {} (rho = {:.8})\n", case.alpha, case.rho));
            for v in &case.checks {
                line(&mut s, v);
            }
        }
        s.push_str("identities\n");
        for v in &self.identities {
            line(&mut s, v);
        }
        s.push_str(if self.pass { "all checks passed\n" } else { "some checks FAILED\n" });
        s
    }
}

fn or_failed(name: &str, threshold: f64, r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::failed(name, threshold, e.to_string()))
}

fn profile_checks(profile: &ScaledProfile, tol: f64) -> Vec<Verdict> {
    let rho = profile.rho;
    let mut out = Vec::new();
    out.push(or_failed("switching |I(rho)|", 1e-10, (|| {
        Ok(Verdict::below("switching |I(rho)|", I_of(rho, &profile.nu)?.abs(), 1e-10))
    })()));

    out.push(or_failed("adjoint |omega(0)|", 1e-8, (|| {
        let om = adjoint_omega(profile, 100)?;
        Ok(Verdict::below("adjoint |omega(0)|", om.samples[0].1.abs(), 1e-8))
    })()));
    out.push(or_failed("adjoint max omega inside", 0.0, (|| {
        let om = adjoint_omega(profile, 100)?;
        let worst = om
            .samples
            .iter()
            .filter(|(q, _)| *q > 0.01 && *q < rho - 0.01)
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Verdict::below("adjoint max omega inside", worst, 0.0))
    })()));

    out.push(or_failed("Euler-Lagrange residual", 1e-6, (|| {
        let mut worst: f64 = 0.0;
        for i in 0..=200 {
            let q = rho + (1.0 - rho) * i as f64 / 200.0;
            worst = worst.max(euler_lagrange_residual(profile, q)?);
        }
        Ok(Verdict::below("Euler-Lagrange residual", worst, 1e-6))
    })()));

    out.push(or_failed("Jacobi min |zeta|", 0.0, (|| {
        let j = jacobi_check(profile, tol)?;
        Ok(Verdict {
            name: "Jacobi min |zeta|".into(),
            pass: j.min_abs_zeta > 0.0,
            value: j.min_abs_zeta,
            threshold: 0.0,
            detail: None,
        })
    })()));

    let delta_alpha = (1e-3 * profile.alpha).max(1e-5);
    out.push(match field_jacobian_check(profile, delta_alpha, 1e-2, 200, tol) {
        Ok(r) => Verdict {
            name: "field Jacobian sign".into(),
            pass: r.sign < 0.0,
            value: r.sign * r.min_abs,
            threshold: 0.0,
            detail: None,
        },
        Err(e) => Verdict::failed("field Jacobian sign", 0.0, e.to_string()),
    });
    out
}

fn identities(resolution: usize, tol: f64) -> Vec<Verdict> {
    let mut out = Vec::new();
    out.push(or_failed("closed form I(rho, 0)", 1e-8, (|| {
        let nu = solve_nu(0.0, tol)?;
        let mut worst: f64 = 0.0;
        for rho in [0.05, 0.1, 0.2, 0.5] {
            worst = worst.max((I_of(rho, &nu)? - I_closed_form_alpha0(rho, &nu)?).abs());
        }
        Ok(Verdict::below("closed form I(rho, 0)", worst, 1e-8))
    })()));
    let worst = [0.1, 0.2, 0.3]
        .iter()
        .map(|&a| (endpoint_integral_quadrature(a) - endpoint_integral_closed_form(a)).abs())
        .fold(0.0, f64::max);
    out.push(Verdict::below("endpoint integral", worst, 1e-8));
    out.push(Verdict::below(
        "endpoint integral at 1/3",
        endpoint_integral_closed_form(ALPHA_MAX).abs(),
        1e-10,
    ));
    out.push(or_failed("Abel invariant residual", 1e-6, (|| {
        let nu = solve_nu(0.0, tol)?;
        let mut worst: f64 = 0.0;
        for q in [0.3, 0.5, 0.9] {
            worst = worst.max(abel_residual(&nu, q)?.abs());
        }
        Ok(Verdict::below("Abel invariant residual", worst, 1e-6))
    })()));
    out.push(or_failed("direct resistance vs 2J", 1e-2, (|| {
        let sol = solve_for_height(1.0, tol)?;
        let direct = resistance_direct_symmetric(&BodyEvaluator::new(&sol), resolution)?;
        let rel = ((direct - 2.0 * sol.J) / (2.0 * sol.J)).abs();
        Ok(Verdict::below("direct resistance vs 2J", rel, 1e-2))
    })()));
    out
}

pub fn run_checks(alphas: &[f64], resolution: usize, inject_fault: bool, tol: f64) -> Result<Report> {
    // reject invalid parameters before doing any work
    for &a in alphas {
        check_alpha(a)?;
    }
    let cases: Vec<Result<AlphaReport>> = alphas
        .par_iter()
        .map(|&alpha| {
            let mut profile = assemble_profile(alpha, tol)?;
            if inject_fault {
                profile = ScaledProfile::from_parts(profile.nu.clone(), profile.rho + FAULT_SHIFT)?;
            }
            Ok(AlphaReport {
                alpha,
                rho: profile.rho,
                checks: profile_checks(&profile, tol),
            })
        })
        .collect();
    let cases = cases.into_iter().collect::<Result<Vec<_>>>()?;
    let identities = identities(resolution, tol);
    let pass = cases.iter().flat_map(|c| &c.checks).chain(&identities).all(|v| v.pass);
    Ok(Report {
        pass,
        fault_injected: inject_fault,
        cases,
        identities,
    })
}
