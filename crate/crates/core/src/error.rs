use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Picard iteration for the singular seed did not settle.
    #[error("Picard iteration did not contract after {iterations} iterations (last sup-difference {last_diff:.3e}): {reason}")]
    ContractionFailure {
        iterations: usize,
        last_diff: f64,
        reason: String,
    },

    #[error("integration blew up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },

    #[error("t = {t} is outside the solution domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no root: {0}")]
    NoRoot(String),

    /// The parameter is outside the range where the construction is known to work.
    #[error("validity: {0}")]
    Validity(String),

    #[error("field Jacobian changes sign near q = {q}")]
    SignChange { q: f64 },

    #[error("p0 = {p0} is inconsistent with profile alpha = {alpha} (expected p0 = {expected})")]
    InconsistentScale { p0: f64, alpha: f64, expected: f64 },

    #[error("body evaluation failed: {0}")]
    Evaluation(String),

    #[error("mesh has no faces")]
    EmptyMesh,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
