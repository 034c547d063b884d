//! Batch experiment runner for the dwlan laboratory.
//!
//! Reads a TOML [`ExperimentSpec`], checks it with [`validate_config`],
//! runs the closed-form sweeps and Monte-Carlo campaigns it describes and
//! writes one row per (sweep point, statistic) as CSV or JSON. The figure
//! presets live in [`presets`].

pub mod error;
pub mod presets;
pub mod run;
pub mod spec;

pub use error::{CliError, Result};
pub use run::{execute, render, run_experiment, write_report, Report, Row, OUTPUT_DIR_ENV};
pub use spec::{plan, validate_config, ExperimentSpec, OutputFormat, Violation};
