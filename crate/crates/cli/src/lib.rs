//! Scenario files and the `region`, `sweep`, `gap` and `dm` commands.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{cmd_dm, cmd_gap, cmd_region, cmd_sweep};
pub use config::{GapMode, ScenarioConfig, SchemeName, SweepSpec};
pub use error::{CliError, Result};
