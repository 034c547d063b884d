use std::path::PathBuf;

use thiserror::Error;

use crate::spec::Violation;

/// Failures of the experiment runner, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config parse error in {origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("{} config violation(s):\n{}", .0.len(), render_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("run failed: {0}")]
    Run(#[from] dwlan_core::Error),
}

impl CliError {
    /// 2 for anything wrong with the config, 3 for output trouble, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ReadConfig { .. } | CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Output { .. } => 3,
            CliError::Run(_) => 1,
        }
    }
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  {x}")).collect::<Vec<_>>().join("\n")
}

pub type Result<T> = std::result::Result<T, CliError>;
