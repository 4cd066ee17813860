//! Command-line runner for loss-landscape experiments.
//!
//! Every operation reads an [`config::ExperimentConfig`], either built from
//! flags or loaded from JSON, runs it through `landscape-core`, and writes
//! JSON (canonical, with provenance), CSV and SVG artifacts into one
//! directory.

pub mod cli;
pub mod config;
pub mod emit;
pub mod error;
pub mod run;
pub mod svg;

pub use config::{ExperimentConfig, Format, ModelSpec, Operation, RenderSpec};
pub use error::{CliError, CliResult};
pub use run::{execute, RunReport};

/// Schema version written into every artifact.
pub const SPEC_VERSION: &str = "1.0.0";

/// Runs a parsed command line.
pub fn run_command(command: &cli::Command) -> CliResult<RunReport> {
    let (config, out) = cli::to_config(command)?;
    execute(&config, &out)
}
