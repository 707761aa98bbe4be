//! Command-line front end: table ingestion, run configuration, report
//! serialization and the subcommands built on them.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod report;

pub use commands::{cmd_run, cmd_split_run, cmd_sweep_folds, cmd_synth, run_dataset};
pub use config::{OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use report::{Report, SplitReport, SweepRow};
