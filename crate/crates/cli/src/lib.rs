//! Scenario runner for the `conepdo` library: JSON configs in, JSON reports
//! and CSV convergence tables out.

pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;
pub mod sweep;

pub use config::{load_config, parse_config, ScenarioConfig, ScenarioKind, SCHEMA_VERSION};
pub use error::{CliError, Result};
pub use report::{run_scenario, Outcome, Report, RunOptions};

/// Reference for every config key, printed by `conepdo schema`.
pub const SCHEMA_REFERENCE: &str = include_str!("../docs/schema.md");
