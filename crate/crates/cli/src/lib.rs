//! Scenario files, unit conversion, and the file formats written by the
//! `cyclovortex` command: `ledger.csv`, WVF1 snapshots and 16-bit PGM images.

pub mod commands;
pub mod config;
pub mod render;
pub mod runner;
pub mod snapshot;
pub mod units;

use std::io;

use thiserror::Error;

pub use config::{parse_config, ConfigError, Scenario};
pub use runner::{run_scenario, RunOptions, RunSummary};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotError};
pub use units::{si_convert, MomentumSource, SiReport, UnitsError};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Simulation(#[from] cyclovortex::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
    #[error("{0}")]
    Snapshot(#[from] SnapshotError),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        Self::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Units(_) => exit::VALIDATION,
            Self::Simulation(e) if e.is_numerical_health() => exit::NUMERICAL,
            Self::Simulation(_) => exit::VALIDATION,
            Self::Io { .. } | Self::Snapshot(_) => exit::IO,
        }
    }
}
