//! Command-line front end for the unital pedal verifier: argument handling,
//! parameter sweeps, per-command checks and report output.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::run;
pub use config::{Cli, Command, Format, Problem, RunConfig};
pub use report::ScanReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] unital_lab_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}
