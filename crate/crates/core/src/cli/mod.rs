//! Experiment orchestration behind the `pwbandit` binary.

mod commands;
pub mod config;
mod output;

pub use commands::{
    cmd_attack, cmd_baseline, cmd_compose, cmd_estimate, load_corpus, load_password_set,
};
pub use config::{ExperimentConfig, Overrides};
pub use output::format_real;

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(#[from] crate::error::Error),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 config error, 3 I/O error, 4 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Internal(_) => 4,
        }
    }
}
