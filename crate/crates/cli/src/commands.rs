use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use minres::extremal::{limit_constants, solve_for_height, solve_for_p0, ExtremalSolution};
use minres::functional::resistance_direct_symmetric;
use minres::geometry::{
    build_mesh, conjugate_profile, export_obj, export_profile_csv, export_sidecar, BodyEvaluator,
    BodySummary,
};
use minres::{Error, Result};

use crate::output::{emit, sig, to_json};
use crate::{check, Command, Format, Target};

pub const TABLE_HEIGHTS: [f64; 9] = [0.5, 1.0, 1.5, 2.0, 2.5, 5.0, 10.0, 50.0, 100.0];
const CSV_HEADER: &str = "M,p0,r,vprime0,J";

/// 1 for bad input, 2 when the construction fails for valid input, 4 for I/O.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 1,
        Error::Io { .. } => 4,
        _ => 2,
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("--tol must be positive, got {tol}")))
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("--{name} must be positive, got {x}")))
    }
}

fn solve_target(target: &Target, tol: f64) -> Result<ExtremalSolution> {
    check_tol(tol)?;
    match (target.m, target.p0) {
        (Some(m), None) => {
            check_positive("M", m)?;
            solve_for_height(m, tol)
        }
        (None, Some(p0)) => {
            check_positive("p0", p0)?;
            solve_for_p0(p0, tol)
        }
        _ => Err(Error::InvalidInput("exactly one of --M and --p0 is required".into())),
    }
}

fn csv_row(s: &BodySummary) -> String {
    format!(
        "{},{},{},{},{}",
        sig(s.M, 6),
        sig(s.p0, 6),
        sig(s.r, 6),
        sig(s.slope0, 6),
        sig(s.J, 6)
    )
}

fn text_block(s: &BodySummary) -> String {
    format!(
        "M          {}\np0         {}\nr(p0)      {}\nv'(+0)     {}\nJ          {}\nresistance {}\n",
        sig(s.M, 8),
        sig(s.p0, 8),
        sig(s.r, 8),
        sig(s.slope0, 8),
        sig(s.J, 8),
        sig(s.resistance, 8)
    )
}

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve { target, common, format } => {
            let sol = solve_target(&target, common.tol)?;
            let s = BodySummary::from(&sol);
            let text = match format {
                Format::Json => to_json(&s),
                Format::Csv => format!("{CSV_HEADER}\n{}\n", csv_row(&s)),
                Format::Text => text_block(&s),
            };
            emit(&text, common.out.as_deref())?;
            Ok(0)
        }
        Command::Table { rows, common, format } => table(&rows, common.tol, format, common.out.as_deref()),
        Command::Constants { common, format } => {
            check_tol(common.tol)?;
            let (c, _) = limit_constants(common.tol)?;
            let text = match format {
                Format::Json => to_json(&json!({
                    "r_hat": c.r_hat,
                    "M_hat": {"kappa_hat_0": c.m_hat, "nu_hat_0": c.nu_hat_0},
                    "vprime0": {"nu_hat_prime_at_r_hat": c.slope_hat, "nu_hat_prime_0": c.nu_hat_prime_0},
                    "J_hat": c.j_hat,
                })),
                Format::Csv => format!(
                    "r_hat,M_hat_kappa0,M_hat_nu0,vprime0_at_r_hat,vprime0_nu0,J_hat\n{},{},{},{},{},{}\n",
                    sig(c.r_hat, 8),
                    sig(c.m_hat, 8),
                    sig(c.nu_hat_0, 8),
                    sig(c.slope_hat, 8),
                    sig(c.nu_hat_prime_0, 8),
                    sig(c.j_hat, 8)
                ),
                Format::Text => format!(
                    "r_hat                    {}\nM_hat = kappa_hat(0)     {}\nM_hat = nu_hat(0)        {}\nv'_0 = nu_hat'(r_hat)    {}\nv'_0 = nu_hat'(0)        {}\nJ_hat                    {}\n",
                    sig(c.r_hat, 8),
                    sig(c.m_hat, 8),
                    sig(c.nu_hat_0, 8),
                    sig(c.slope_hat, 8),
                    sig(c.nu_hat_prime_0, 8),
                    sig(c.j_hat, 8)
                ),
            };
            emit(&text, common.out.as_deref())?;
            Ok(0)
        }
        Command::Check {
            alpha,
            resolution,
            inject_fault,
            common,
            format,
        } => {
            check_tol(common.tol)?;
            let report = check::run_checks(&alpha, resolution, inject_fault, common.tol)?;
            let text = match format {
                Format::Json => to_json(&report),
                _ => report.to_text(),
            };
            emit(&text, common.out.as_deref())?;
            Ok(if report.pass { 0 } else { 3 })
        }
        Command::Mesh {
            target,
            resolution,
            tol,
            out,
        } => {
            let sol = solve_target(&target, tol)?;
            if resolution < 4 {
                return Err(Error::InvalidInput(format!("--resolution must be >= 4, got {resolution}")));
            }
            let mesh = build_mesh(&sol, (resolution / 2).max(2), resolution)?;
            mesh.check()?;
            export_obj(&mesh, &out)?;
            let sidecar = out.with_extension("json");
            export_sidecar(&sol, &sidecar)?;
            let csv = with_suffix(&out, "_profile.csv");
            export_profile_csv(&conjugate_profile(&sol, 2 * resolution + 1)?, &csv)?;
            let summary = json!({
                "obj": out,
                "sidecar": sidecar,
                "profile": csv,
                "vertices": mesh.vertices.len(),
                "faces": mesh.faces.len(),
            });
            print!("{}", to_json(&summary));
            Ok(0)
        }
        Command::Resistance {
            target,
            resolution,
            common,
            format,
        } => {
            let sol = solve_target(&target, common.tol)?;
            let body = BodyEvaluator::new(&sol);
            let direct = resistance_direct_symmetric(&body, resolution)?;
            let from_j = 2.0 * sol.J;
            let rel = ((direct - from_j) / from_j).abs();
            let text = match format {
                Format::Json => to_json(&json!({
                    "M": sol.M,
                    "p0": sol.p0,
                    "resolution": resolution,
                    "resistance_direct": direct,
                    "resistance_2J": from_j,
                    "relative_difference": rel,
                })),
                Format::Csv => format!(
                    "M,p0,resistance_direct,resistance_2J\n{},{},{},{}\n",
                    sig(sol.M, 8),
                    sig(sol.p0, 8),
                    sig(direct, 8),
                    sig(from_j, 8)
                ),
                Format::Text => format!(
                    "direct     {}\n2J         {}\nrel. diff. {:.2e}\n",
                    sig(direct, 8),
                    sig(from_j, 8),
                    rel
                ),
            };
            emit(&text, common.out.as_deref())?;
            Ok(0)
        }
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn table(rows: &[f64], tol: f64, format: Format, out: Option<&Path>) -> Result<u8> {
    check_tol(tol)?;
    for &m in rows {
        check_positive("rows", m)?;
    }
    let results: Vec<(f64, Result<BodySummary>)> = rows
        .par_iter()
        .map(|&m| (m, solve_for_height(m, tol).map(|s| BodySummary::from(&s))))
        .collect();
    let mut failed = false;
    for (m, r) in &results {
        if let Err(e) = r {
            eprintln!("row M = {m}: {e}");
            failed = true;
        }
    }
    let text = match format {
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for (m, r) in &results {
                match r {
                    Ok(b) => s.push_str(&csv_row(b)),
                    Err(_) => s.push_str(&format!("{},NaN,NaN,NaN,NaN", sig(*m, 6))),
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = results
                .iter()
                .map(|(m, r)| match r {
                    Ok(b) => serde_json::to_value(b).expect("serializable"),
                    Err(e) => json!({"M": m, "error": e.to_string()}),
                })
                .collect();
            to_json(&rows)
        }
        Format::Text => {
            let mut s = format!("{:>8} {:>10} {:>10} {:>10} {:>12}\n", "M", "p0", "r(p0)", "v'(+0)", "J");
            for (m, r) in &results {
                match r {
                    Ok(b) => s.push_str(&format!(
                        "{:>8} {:>10} {:>10} {:>10} {:>12}\n",
                        sig(b.M, 6),
                        sig(b.p0, 6),
                        sig(b.r, 6),
                        sig(b.slope0, 6),
                        sig(b.J, 6)
                    )),
                    Err(_) => s.push_str(&format!("{:>8} failed\n", sig(*m, 6))),
                }
            }
            s
        }
    };
    emit(&text, out)?;
    Ok(if failed { 2 } else { 0 })
}
