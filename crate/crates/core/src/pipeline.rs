//! End-to-end analysis: both posteriors and their superset combination.

use serde::{Deserialize, Serialize};

use crate::data::{make_folds, Dataset};
use crate::error::Result;
use crate::linear::h1_posterior;
use crate::local::h0_posterior;
use crate::numerics::HyperGPrior;
use crate::posterior::{ModelPosterior, ModelSpace};
use crate::superset::{superset_probability, Inclusion, SupersetReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub folds: usize,
    pub seed: u64,
    pub hyper_a: f64,
    pub inclusion: Inclusion,
    pub include_empty: bool,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self { folds: 10, seed: 1, hyper_a: 3.0, inclusion: Inclusion::Strict, include_empty: true }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOutcome {
    pub settings: AnalysisSettings,
    pub model_space: ModelSpace,
    pub h1: ModelPosterior,
    pub h0: ModelPosterior,
    pub superset: SupersetReport,
}

impl AnalysisOutcome {
    pub fn probability(&self) -> f64 {
        self.superset.probability
    }
}

pub fn analyze(ds: &Dataset, settings: AnalysisSettings) -> Result<AnalysisOutcome> {
    let prior = HyperGPrior::new(settings.hyper_a)?;
    let plan = make_folds(ds.n(), settings.folds, settings.seed)?;
    let model_space = ModelSpace::all(ds.p(), settings.include_empty)?;
    let h1 = h1_posterior(ds, &model_space, prior)?;
    let h0 = h0_posterior(ds, &model_space, &plan)?;
    let superset = superset_probability(&h0, &h1, settings.inclusion)?;
    Ok(AnalysisOutcome { settings, model_space, h1, h0, superset })
}
