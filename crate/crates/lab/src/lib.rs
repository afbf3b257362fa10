//! Experiment drivers for distinguishability trade-offs.
//!
//! Each `run_*` function in [`experiments`] returns a [`table::Table`] plus
//! per-point statuses; [`cli`] wraps them as `distcc-lab` subcommands that
//! write versioned CSV and an optional JSON run manifest.

pub mod cli;
pub mod experiments;
pub mod grid;
pub mod manifest;
pub mod table;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid arguments: {0}")]
    Args(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] distcc_core::Error),
}

impl LabError {
    /// 2 for bad arguments (including rejected task parameters), 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Io { .. } => 3,
            LabError::Args(_) | LabError::Core(_) => 2,
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
