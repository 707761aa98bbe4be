//! Reading delimited text tables into a [`Dataset`].

use std::path::Path;

use serde::{Deserialize, Serialize};
use superset_core::Dataset;

use crate::error::{CliError, Result};

/// Header of the diabetes file distributed with the LARS study.
pub const DIABETES_COLUMNS: [&str; 11] =
    ["AGE", "SEX", "BMI", "BP", "S1", "S2", "S3", "S4", "S5", "S6", "Y"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    /// Natural logarithm.
    E,
    #[value(name = "10")]
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    pub fn apply(self, v: f64) -> f64 {
        match self {
            LogBase::E => v.ln(),
            LogBase::Ten => v.log10(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schema {
    Diabetes,
    Generic,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub response: Option<String>,
    pub log_response: Option<LogBase>,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub dataset: Dataset,
    pub schema: Schema,
    pub response: String,
}

pub fn ingest(path: &Path, opts: &IngestOptions) -> Result<Ingested> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_table(&text, opts)
}

/// Parses tab- or comma-separated text with a header row. The delimiter is
/// tab when the header contains one, comma otherwise.
pub fn parse_table(text: &str, opts: &IngestOptions) -> Result<Ingested> {
    let header_line = text.lines().next().ok_or_else(|| CliError::Table("empty input".into()))?;
    let delimiter = if header_line.contains('\t') { b'\t' } else { b',' };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Table(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();

    let schema = if header.iter().map(String::as_str).eq(DIABETES_COLUMNS) {
        Schema::Diabetes
    } else {
        Schema::Generic
    };
    let response = match (&opts.response, schema) {
        (Some(r), _) => r.clone(),
        (None, Schema::Diabetes) => "Y".to_string(),
        (None, Schema::Generic) => {
            return Err(CliError::Schema("no response column given (use --response)".into()))
        }
    };
    let response_idx = header
        .iter()
        .position(|h| *h == response)
        .ok_or_else(|| CliError::Schema(format!("response column '{response}' not in header")))?;

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| CliError::Table(format!("data row {row}: {e}")))?;
        for (c, cell) in record.iter().enumerate() {
            let value = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                CliError::Parse { row, column: header[c].clone(), value: cell.to_string() }
            })?;
            columns[c].push(value);
        }
    }

    let mut y = columns.remove(response_idx);
    let mut names = header;
    names.remove(response_idx);
    if let Some(base) = opts.log_response {
        if let Some(i) = y.iter().position(|&v| v <= 0.0) {
            return Err(CliError::Data(format!(
                "response row {} is {} and cannot be log-transformed",
                i + 1,
                y[i]
            )));
        }
        y.iter_mut().for_each(|v| *v = base.apply(*v));
    }
    let dataset = Dataset::new(y, columns, names)?;
    Ok(Ingested { dataset, schema, response })
}
