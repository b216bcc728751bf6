//! Experiment harness for `fracdiff-core`: TOML manifests, the solve /
//! convergence / table / reference runs, and CSV or JSON output.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};

/// Environment variable that overrides the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "FRACDIFF_OUTPUT_DIR";
