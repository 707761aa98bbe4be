use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use superset_core::{AnalysisSettings, Inclusion};

use crate::error::{CliError, Result};
use crate::ingest::{IngestOptions, LogBase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Everything needed to reproduce one analysis run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub data: PathBuf,
    pub response: Option<String>,
    pub log_response: Option<LogBase>,
    pub folds: usize,
    pub seed: u64,
    pub hyper_a: f64,
    pub inclusive: bool,
    pub include_empty: bool,
    pub precision_cols: Vec<String>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

pub const DEFAULT_PRECISION_COLUMNS: [&str; 2] = ["BP", "S4"];

impl RunConfig {
    pub fn new(data: impl Into<PathBuf>) -> Self {
        Self {
            data: data.into(),
            response: None,
            log_response: None,
            folds: 10,
            seed: 1,
            hyper_a: 3.0,
            inclusive: false,
            include_empty: true,
            precision_cols: DEFAULT_PRECISION_COLUMNS.iter().map(|s| s.to_string()).collect(),
            out: None,
            format: OutputFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(CliError::Config(format!("--folds must be at least 2, got {}", self.folds)));
        }
        if !(self.hyper_a > 2.0) || !self.hyper_a.is_finite() {
            return Err(CliError::Config(format!("--hyper-a must exceed 2, got {}", self.hyper_a)));
        }
        Ok(())
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions { response: self.response.clone(), log_response: self.log_response }
    }

    pub fn settings(&self) -> AnalysisSettings {
        AnalysisSettings {
            folds: self.folds,
            seed: self.seed,
            hyper_a: self.hyper_a,
            inclusion: if self.inclusive { Inclusion::Inclusive } else { Inclusion::Strict },
            include_empty: self.include_empty,
        }
    }
}
