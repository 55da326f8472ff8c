use std::path::PathBuf;

use crate::Vector;

/// Errors produced by the solvers, problem factories and data loaders.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite {what} at step {step}")]
    NumericFailure { step: usize, what: &'static str },

    #[error("point is not strictly interior (min slack {min_slack:e})")]
    InfeasiblePoint { min_slack: f64 },

    #[error("barrier Hessian is numerically singular")]
    DegeneratePolytope,

    #[error("Newton recentering stagnated after {steps} steps")]
    Stagnation { steps: usize, x: Vector },

    #[error("inner solver stopped after {work} gradient calls with gap bound {gap:e} above {target:e}")]
    NotConverged { work: u64, gap: f64, target: f64 },

    #[error("polytope has {rows} rows, need at least {required}")]
    Structural { rows: usize, required: usize },

    #[error("inner solve failed at outer iteration {outer}: {source}")]
    Inner {
        outer: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: unsupported label {label} (binary labels only)")]
    UnsupportedLabel {
        path: PathBuf,
        line: usize,
        label: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
