//! Probability that the linear model selects a superset of the covariates
//! chosen by the local-constant model.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::SubsetMask;
use crate::error::{Error, Result};
use crate::posterior::{Hypothesis, ModelPosterior};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inclusion {
    /// `M` strictly contains `M*`.
    #[default]
    Strict,
    /// `M` contains or equals `M*`.
    Inclusive,
}

pub fn is_superset(m: SubsetMask, m_star: SubsetMask, inclusion: Inclusion) -> Result<bool> {
    if m.width() != m_star.width() {
        return Err(Error::InvalidArgument(format!(
            "mask widths differ: {} vs {}",
            m.width(),
            m_star.width()
        )));
    }
    let contains = m_star.is_subset_of(m);
    Ok(match inclusion {
        Inclusion::Strict => contains && m != m_star,
        Inclusion::Inclusive => contains,
    })
}

pub fn is_strict_superset(m: SubsetMask, m_star: SubsetMask) -> Result<bool> {
    is_superset(m, m_star, Inclusion::Strict)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairContribution {
    /// Subset `M` weighted by the linear-model posterior.
    pub h1_subset: SubsetMask,
    /// Subset `M*` weighted by the local-model posterior.
    pub h0_subset: SubsetMask,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupersetReport {
    pub probability: f64,
    pub inclusion: Inclusion,
    /// `sum_M Pr_H0(M) Pr_H1(M)`.
    pub diagonal_mass: f64,
    /// Every nonzero pair, largest first.
    pub pair_contributions: Vec<PairContribution>,
}

impl SupersetReport {
    /// Pairs worth listing in a summary (contribution at least 1e-15).
    pub fn listed_pairs(&self, limit: usize) -> impl Iterator<Item = &PairContribution> {
        self.pair_contributions
            .iter()
            .take_while(|p| p.contribution >= 1e-15)
            .take(limit)
    }
}

/// `sum_M sum_M* I(M ⊃ M*) Pr(M* | H0) Pr(M | H1)`.
///
/// For each `M` with positive mass only the submasks of `M` are visited.
pub fn superset_probability(
    post_h0: &ModelPosterior,
    post_h1: &ModelPosterior,
    inclusion: Inclusion,
) -> Result<SupersetReport> {
    if post_h0.hypothesis() != Hypothesis::H0 || post_h1.hypothesis() != Hypothesis::H1 {
        return Err(Error::InvalidArgument("posteriors passed in the wrong order".into()));
    }
    if post_h0.masks() != post_h1.masks() {
        return Err(Error::InvalidArgument("posteriors are over different model spaces".into()));
    }
    let h0_index: HashMap<u64, f64> = post_h0.iter().map(|(m, p)| (m.bits(), p)).collect();
    let width = post_h0.masks()[0].width();

    let mut probability = 0.0;
    let mut diagonal_mass = 0.0;
    let mut pairs = Vec::new();
    for (m, p1) in post_h1.iter() {
        if p1 == 0.0 {
            continue;
        }
        if let Some(&p0) = h0_index.get(&m.bits()) {
            diagonal_mass += p0 * p1;
        }
        let full = m.bits();
        let mut sub = full;
        loop {
            let m_star = SubsetMask::new(width, sub)?;
            if let Some(&p0) = h0_index.get(&sub) {
                if p0 > 0.0 && is_superset(m, m_star, inclusion)? {
                    let contribution = p0 * p1;
                    if contribution > 0.0 {
                        probability += contribution;
                        pairs.push(PairContribution { h1_subset: m, h0_subset: m_star, contribution });
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & full;
        }
    }
    pairs.sort_by(|a, b| {
        b.contribution
            .total_cmp(&a.contribution)
            .then(a.h1_subset.bits().cmp(&b.h1_subset.bits()))
            .then(a.h0_subset.bits().cmp(&b.h0_subset.bits()))
    });
    Ok(SupersetReport {
        probability: probability.clamp(0.0, 1.0),
        inclusion,
        diagonal_mass,
        pair_contributions: pairs,
    })
}
