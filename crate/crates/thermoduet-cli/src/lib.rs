//! Scenario files, CSV emission, verification reports and parameter sweeps
//! on top of the `thermoduet` engine.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod summary;
pub mod verify;

pub use config::{OutputGroup, ScenarioConfig, SweepAxis};
pub use error::{CliError, CliResult, ExitStatus};
