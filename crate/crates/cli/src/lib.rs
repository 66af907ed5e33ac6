//! `collar` batch front end: configuration, experiment orchestration and
//! report emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod json;
pub mod report;

pub use config::{ExperimentConfig, Expectation, Overrides, Preset};
pub use error::{CliError, CliResult};
pub use report::Report;
