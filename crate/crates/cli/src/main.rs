use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod check;
mod commands;
mod output;

/// Locally optimal bodies for Newton's aerodynamic problem with a vertical
/// symmetry plane.
#[derive(Debug, Parser)]
#[command(name = "minres", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Exactly one of the height `M` or the slope bound `p0`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Target {
    /// Height of the body.
    #[arg(long = "M", allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Right end of the extremal, `p0 > sqrt(3)`.
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Local error tolerance of the ODE integration.
    #[arg(long, default_value_t = minres::ode::DEFAULT_TOL, allow_negative_numbers = true)]
    pub tol: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for one body and print M, p0, r, v'(+0), J and the resistance 2J.
    Solve {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recompute the table of bodies for a list of heights.
    Table {
        /// Heights to compute.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true,
              default_values_t = commands::TABLE_HEIGHTS)]
        rows: Vec<f64>,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Constants of the limit extremal as p0 grows.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the verification suite and report pass/fail per check.
    Check {
        /// Values of alpha = 1/p0^2 to verify.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true,
              default_values_t = [0.0, 0.01, 0.1])]
        alpha: Vec<f64>,
        /// Grid resolution of the direct resistance integration.
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        /// Shift the switching point by 1e-2 before checking.
        #[arg(long)]
        inject_fault: bool,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write the body as an OBJ mesh with a JSON sidecar and a CSV section.
    Mesh {
        #[command(flatten)]
        target: Target,
        /// Number of points on the base circle.
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Local error tolerance of the ODE integration.
        #[arg(long, default_value_t = minres::ode::DEFAULT_TOL, allow_negative_numbers = true)]
        tol: f64,
        /// OBJ output path.
        #[arg(long, default_value = "body.obj")]
        out: PathBuf,
    },
    /// Integrate 1/(1+|grad u|^2) over the disk directly and compare with 2J.
    Resistance {
        #[command(flatten)]
        target: Target,
        /// Number of radial and angular cells.
        #[arg(long, default_value_t = minres::functional::direct::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn configure_threads() {
    if let Ok(s) = std::env::var("NEWTON_MINRES_THREADS") {
        match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // only fails if a pool already exists, which cannot happen here
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring NEWTON_MINRES_THREADS = {s:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
