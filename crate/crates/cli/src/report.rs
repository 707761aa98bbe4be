//! Serialized forms of analysis results.

use serde::{Deserialize, Serialize};
use superset_core::{AnalysisOutcome, Dataset, ModelPosterior, SubsetMask, FOLD_PRNG};

use crate::config::RunConfig;

/// Entries listed in the `top_*` sections.
pub const TOP_ENTRIES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub n: usize,
    pub p: usize,
    pub source: String,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetEntry {
    pub subset: Vec<String>,
    pub probability: f64,
    /// Unnormalized log marginal likelihood; `None` when it is `-inf`.
    pub log_weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub h1_subset: Vec<String>,
    pub h0_subset: Vec<String>,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub probability: f64,
    pub strict: bool,
    pub folds: usize,
    pub seed: u64,
    pub a: f64,
    pub model_space_size: usize,
    pub model_space: String,
    pub prng: String,
    pub h0_total: f64,
    pub h1_total: f64,
    pub diagonal_mass: f64,
    pub top_h0: Vec<SubsetEntry>,
    pub top_h1: Vec<SubsetEntry>,
    pub top_pairs: Vec<PairEntry>,
    pub dataset: DatasetInfo,
    pub config: RunConfig,
}

fn names_of(mask: SubsetMask, ds: &Dataset) -> Vec<String> {
    mask.indices().map(|j| ds.names()[j].clone()).collect()
}

fn top_entries(post: &ModelPosterior, ds: &Dataset) -> Vec<SubsetEntry> {
    let mut order: Vec<usize> = (0..post.masks().len()).collect();
    let probs = post.probabilities();
    order.sort_by(|&a, &b| {
        probs[b].total_cmp(&probs[a]).then(post.masks()[a].bits().cmp(&post.masks()[b].bits()))
    });
    order
        .into_iter()
        .take(TOP_ENTRIES)
        .map(|i| {
            let w = post.log_weights()[i];
            SubsetEntry {
                subset: names_of(post.masks()[i], ds),
                probability: probs[i],
                log_weight: w.is_finite().then_some(w),
            }
        })
        .collect()
}

impl Report {
    pub fn new(outcome: &AnalysisOutcome, ds: &Dataset, source: String, config: &RunConfig) -> Self {
        let space = &outcome.model_space;
        let p = ds.p();
        let model_space = if space.includes_empty() {
            format!("all 2^{p} subsets")
        } else {
            format!("2^{p} - 1 nonempty subsets")
        };
        Self {
            probability: outcome.superset.probability,
            strict: !config.inclusive,
            folds: outcome.settings.folds,
            seed: outcome.settings.seed,
            a: outcome.settings.hyper_a,
            model_space_size: space.len(),
            model_space,
            prng: FOLD_PRNG.to_string(),
            h0_total: outcome.h0.total(),
            h1_total: outcome.h1.total(),
            diagonal_mass: outcome.superset.diagonal_mass,
            top_h0: top_entries(&outcome.h0, ds),
            top_h1: top_entries(&outcome.h1, ds),
            top_pairs: outcome
                .superset
                .listed_pairs(TOP_ENTRIES)
                .map(|pc| PairEntry {
                    h1_subset: names_of(pc.h1_subset, ds),
                    h0_subset: names_of(pc.h0_subset, ds),
                    contribution: pc.contribution,
                })
                .collect(),
            dataset: DatasetInfo { n: ds.n(), p, source, columns: ds.names().to_vec() },
            config: config.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n")
    }

    pub fn csv_header() -> &'static str {
        "probability,strict,folds,seed,a,model_space_size,n,p"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_sig17(self.probability),
            self.strict,
            self.folds,
            self.seed,
            fmt_sig17(self.a),
            self.model_space_size,
            self.dataset.n,
            self.dataset.p
        )
    }
}

/// One partition of a precision-split run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub rows: usize,
    pub report: Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub precision_columns: Vec<String>,
    pub fine: PartitionReport,
    pub coarse: PartitionReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub folds: usize,
    pub probability: f64,
}

pub const SWEEP_HEADER: &str = "folds,probability";

pub fn render_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{}\n", r.folds, fmt_sig17(r.probability)));
    }
    out
}

pub fn parse_sweep_csv(text: &str) -> Option<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next()? != SWEEP_HEADER {
        return None;
    }
    lines
        .map(|l| {
            let (f, p) = l.split_once(',')?;
            Some(SweepRow { folds: f.parse().ok()?, probability: p.parse().ok()? })
        })
        .collect()
}

/// Scientific notation with 17 significant digits.
pub fn fmt_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for v in [0.2237, 1.0 / 3.0, 1e-300, 123456.789, 0.0, -2.5] {
            assert_eq!(fmt_sig17(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_sig17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn sweep_csv_round_trip() {
        let rows = vec![
            SweepRow { folds: 2, probability: 0.21 },
            SweepRow { folds: 3, probability: 1.0 / 7.0 },
        ];
        let text = render_sweep_csv(&rows);
        assert!(text.starts_with("folds,probability\n"));
        assert_eq!(parse_sweep_csv(&text).unwrap(), rows);
    }
}
