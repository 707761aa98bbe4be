//! Subcommand implementations. Each returns its result as a value; writing
//! to disk or stdout is left to [`emit`].

use std::io::Write;
use std::path::Path;

use log::info;
use superset_core::{analyze, generate, precision_partition, Dataset, SynthConfig};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::ingest::{ingest, Ingested};
use crate::report::{fmt_sig17, PartitionReport, Report, SplitReport, SweepRow};

pub fn load(config: &RunConfig) -> Result<Ingested> {
    config.validate()?;
    let ing = ingest(&config.data, &config.ingest_options())?;
    info!(
        "loaded {} ({:?} schema): n = {}, p = {}",
        config.data.display(),
        ing.schema,
        ing.dataset.n(),
        ing.dataset.p()
    );
    Ok(ing)
}

fn check_folds(n: usize, folds: usize, what: &str) -> Result<()> {
    if folds > n {
        return Err(CliError::Config(format!(
            "{what} has {n} rows, fewer than {folds} folds; reduce --folds"
        )));
    }
    Ok(())
}

fn source_of(config: &RunConfig) -> String {
    config.data.display().to_string()
}

/// Runs the full analysis on an already loaded dataset.
pub fn run_dataset(ds: &Dataset, source: String, config: &RunConfig) -> Result<Report> {
    check_folds(ds.n(), config.folds, "dataset")?;
    let outcome = analyze(ds, config.settings())?;
    Ok(Report::new(&outcome, ds, source, config))
}

pub fn cmd_run(config: &RunConfig) -> Result<Report> {
    let ing = load(config)?;
    run_dataset(&ing.dataset, source_of(config), config)
}

/// One run per fold count in `m_min..=m_max`, all with the configured seed.
pub fn cmd_sweep_folds(config: &RunConfig, m_min: usize, m_max: usize) -> Result<Vec<SweepRow>> {
    if m_min < 2 || m_min > m_max {
        return Err(CliError::Config(format!("invalid fold range {m_min}..={m_max}")));
    }
    let ing = load(config)?;
    check_folds(ing.dataset.n(), m_max, "dataset")?;
    (m_min..=m_max)
        .map(|m| {
            let settings = superset_core::AnalysisSettings { folds: m, ..config.settings() };
            let outcome = analyze(&ing.dataset, settings)?;
            info!("folds = {m}: probability {}", outcome.probability());
            Ok(SweepRow { folds: m, probability: outcome.probability() })
        })
        .collect()
}

/// Independent runs on the fine and coarse precision partitions.
pub fn cmd_split_run(config: &RunConfig) -> Result<SplitReport> {
    let ing = load(config)?;
    let ds = &ing.dataset;
    for col in &config.precision_cols {
        if ds.column_index(col).is_none() {
            return Err(CliError::Schema(format!("precision column '{col}' not in dataset")));
        }
    }
    let part = precision_partition(ds, &config.precision_cols)?;
    for (rows, what) in [(&part.fine, "fine"), (&part.coarse, "coarse")] {
        if rows.is_empty() {
            return Err(CliError::Data(format!("{what} partition is empty")));
        }
    }
    for (rows, what) in [(&part.fine, "fine"), (&part.coarse, "coarse")] {
        check_folds(rows.len(), config.folds, &format!("{what} partition"))?;
    }
    let run_part = |rows: &[usize], what: &str| -> Result<PartitionReport> {
        let sub = ds.select_rows(rows)?;
        let report = run_dataset(&sub, format!("{} ({what})", source_of(config)), config)?;
        Ok(PartitionReport { rows: rows.len(), report })
    };
    Ok(SplitReport {
        precision_columns: config.precision_cols.clone(),
        fine: run_part(&part.fine, "fine")?,
        coarse: run_part(&part.coarse, "coarse")?,
    })
}

/// Covariates in dataset order followed by the response column `Y`.
pub fn render_dataset_csv(ds: &Dataset) -> String {
    let mut out = ds.names().join(",");
    out.push_str(",Y\n");
    for i in 0..ds.n() {
        for j in 0..ds.p() {
            out.push_str(&fmt_sig17(ds.column(j)[i]));
            out.push(',');
        }
        out.push_str(&fmt_sig17(ds.y()[i]));
        out.push('\n');
    }
    out
}

pub fn cmd_synth(config: &SynthConfig, out: Option<&Path>) -> Result<Dataset> {
    let ds = generate(config)?;
    emit(&render_dataset_csv(&ds), out)?;
    Ok(ds)
}

/// Writes to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
