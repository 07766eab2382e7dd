//! Config-driven Monte Carlo experiments, persistence and plotting.
//!
//! Runs are pure functions of their [`ExperimentConfig`]: cells and trials
//! draw from addressed [`RngStream`](crate::rng::RngStream)s and are merged in
//! `(cell, trial)` order, so CSV and JSON outputs are byte-identical across
//! runs with the same config and seed.

mod config;
mod experiment;
mod export;
mod plot;

use std::path::PathBuf;

pub use config::{ExperimentConfig, OutputFormat, Regime, VerifySettings, CONFIG_SCHEMA_VERSION};
pub use experiment::{
    run_experiment, run_grow_k, run_grow_n, run_verification, trials_for_cell, CellResult, ExperimentResult,
    VerificationResult, RESULT_SCHEMA_VERSION,
};
pub use export::{cell_file_stem, export_result, export_verification, load_result};
pub use plot::{render_scatter, scatter_svg};

use crate::esd::EsdError;
use crate::matpoly::PolyError;
use crate::verify::VerifyError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: EsdError,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Esd(#[from] EsdError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl HarnessError {
    /// Bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            HarnessError::Config(_)
                | HarnessError::Parse { .. }
                | HarnessError::Json { .. }
                | HarnessError::Verify(VerifyError::InvalidConfig(_))
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
