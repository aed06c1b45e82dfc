// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use spinstar::SpinStarError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config {origin}: {message}")]
    Config { origin: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("table parse error on line {line}: {message}")]
    Table { line: usize, message: String },

    #[error(transparent)]
    Core(#[from] SpinStarError),

    #[error("verification failed: {0}")]
    SuiteFailure(String),
}

impl CliError {
    pub fn config(origin: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            origin: origin.into(),
            message: message.into(),
        }
    }

    /// 0 success, 1 validation error, 2 suite failure, 3 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::SuiteFailure(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
