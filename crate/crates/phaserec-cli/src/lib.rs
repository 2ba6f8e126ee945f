//! Config-driven orchestration of the scattering workbench: forward
//! simulation, phaseless-data generation, phase recovery, grid-convergence
//! studies, and the point-source reduction, with JSON reports and
//! plot-ready CSV outputs.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{validate_config, Mode, RawConfig, ValidatedConfig};
pub use report::RunReport;
pub use runner::{run_experiment, RunOutcome};

/// Errors surfaced by the CLI, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or precondition; exit code 2.
    Validation(String),
    /// Numerical failure during a run; exit code 3.
    Numerical(String),
    /// Filesystem failure during a run; exit code 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "config error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            CliError::Io(msg) => write!(f, "io failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
