use serde::{Deserialize, Serialize};

use crate::data::SubsetMask;
use crate::error::{Error, Result};
use crate::numerics::log_sum_exp;

/// Which regression model a posterior belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Local-constant alternative model.
    H0,
    /// Normal linear model.
    H1,
}

/// Largest covariate count for exhaustive enumeration.
pub const MAX_ENUMERATION_WIDTH: usize = 20;

/// The enumerated list of candidate covariate subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpace {
    width: usize,
    masks: Vec<SubsetMask>,
}

impl ModelSpace {
    /// All `2^p` subsets (or `2^p - 1` without the empty one), by bit pattern.
    pub fn all(p: usize, include_empty: bool) -> Result<Self> {
        if p == 0 || p > MAX_ENUMERATION_WIDTH {
            return Err(Error::Config(format!(
                "exhaustive enumeration supports 1..={MAX_ENUMERATION_WIDTH} covariates, got {p}"
            )));
        }
        let start = if include_empty { 0 } else { 1 };
        let masks = (start..1u64 << p)
            .map(|bits| SubsetMask::new(p, bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { width: p, masks })
    }

    pub fn from_masks(masks: Vec<SubsetMask>) -> Result<Self> {
        let width = masks
            .first()
            .map(|m| m.width())
            .ok_or_else(|| Error::InvalidArgument("model space is empty".into()))?;
        if masks.iter().any(|m| m.width() != width) {
            return Err(Error::InvalidArgument("model space masks differ in width".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if !masks.iter().all(|m| seen.insert(*m)) {
            return Err(Error::InvalidArgument("model space has duplicate subsets".into()));
        }
        Ok(Self { width, masks })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn masks(&self) -> &[SubsetMask] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn includes_empty(&self) -> bool {
        self.masks.iter().any(|m| m.k() == 0)
    }
}

/// Normalized probabilities over a model space under a uniform model prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPosterior {
    hypothesis: Hypothesis,
    masks: Vec<SubsetMask>,
    log_weights: Vec<f64>,
    probabilities: Vec<f64>,
}

impl ModelPosterior {
    pub fn from_log_weights(
        hypothesis: Hypothesis,
        masks: Vec<SubsetMask>,
        log_weights: Vec<f64>,
    ) -> Result<Self> {
        if masks.is_empty() || masks.len() != log_weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} subsets with {} log weights",
                masks.len(),
                log_weights.len()
            )));
        }
        if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::Domain("log marginal likelihood is NaN or +inf".into()));
        }
        let total = log_sum_exp(&log_weights)?;
        if total == f64::NEG_INFINITY {
            return Err(Error::Domain(format!(
                "every model has zero marginal likelihood under {hypothesis:?}"
            )));
        }
        let probabilities = log_weights.iter().map(|w| (w - total).exp()).collect();
        Ok(Self { hypothesis, masks, log_weights, probabilities })
    }

    pub fn hypothesis(&self) -> Hypothesis {
        self.hypothesis
    }

    pub fn masks(&self) -> &[SubsetMask] {
        &self.masks
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, mask: SubsetMask) -> Option<f64> {
        self.masks.iter().position(|m| *m == mask).map(|i| self.probabilities[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        self.masks.iter().copied().zip(self.probabilities.iter().copied())
    }

    /// Entries by descending probability; ties by ascending bit pattern.
    pub fn ranked(&self) -> Vec<(SubsetMask, f64)> {
        let mut out: Vec<_> = self.iter().collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.bits().cmp(&b.0.bits())));
        out
    }

    pub fn mode(&self) -> (SubsetMask, f64) {
        self.ranked()[0]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}
