//! Batch runner for the `ns-galerkin` laboratory: reads a TOML experiment,
//! executes it and writes trajectories, reports and plots into an output
//! directory.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod plots;
mod run;

use std::path::PathBuf;

pub use config::{Command, ExperimentConfig};
pub use plots::emit_plots;
pub use run::{run_experiment, RunMeta, RunOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_STRICT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("output directory is locked by another run: {0}")]
    Locked(PathBuf),
    #[error(transparent)]
    Core(#[from] ns_galerkin::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(ns_galerkin::Error::BlowUpDetected { .. }) => EXIT_BLOWUP,
            RunError::Core(ns_galerkin::Error::NonConvergence { .. }) => EXIT_NONCONVERGENCE,
            _ => EXIT_CONFIG,
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Core(e.into())
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides `out_dir` from the config.
    pub out_dir: Option<PathBuf>,
    /// Exit with [`EXIT_STRICT`] when any verification check fails.
    pub strict: bool,
    pub threads: Option<usize>,
}
