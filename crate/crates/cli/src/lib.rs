//! Experiment runner for min-min problems: Vaidya with restarted FGM or Varag
//! inner solves, against Varag on the joint problem.

use std::io;
use std::path::PathBuf;

pub mod experiment;
pub mod synthetic;

pub use experiment::{
    align_histories, build_problem, compare, run_experiment, BuiltProblem, CompareReport, ExperimentConfig,
    ExperimentReport, Method, ProblemSource,
};
pub use synthetic::SyntheticSpec;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] minmin_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("solver failed, partial history ({rows} rows) in {}: {source}", history.display())]
    Solver { source: minmin_core::Error, rows: usize, history: PathBuf },
}
