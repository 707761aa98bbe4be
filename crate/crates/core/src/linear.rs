//! Normal linear model with a hyper-g prior, scored by its Bayes factor
//! against the intercept-only model.

use log::warn;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{mean_sd, Dataset, SubsetMask};
use crate::error::{Error, Result};
use crate::numerics::HyperGPrior;
use crate::ols::least_squares;
use crate::posterior::{Hypothesis, ModelPosterior, ModelSpace};

/// R^2 values above this are clipped before the g-integral.
pub const R2_CEILING: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H1ModelScore {
    pub subset: SubsetMask,
    pub r2: f64,
    pub log_bf: f64,
}

/// Coefficient of determination of the intercept-included least-squares fit
/// on standardized covariates. The empty subset gives 0.
pub fn r_squared(ds: &Dataset, subset: SubsetMask) -> Result<f64> {
    if subset.width() != ds.p() {
        return Err(Error::InvalidArgument(format!(
            "subset width {} does not match p = {}",
            subset.width(),
            ds.p()
        )));
    }
    let n = ds.n();
    let k = subset.k();
    if k == 0 {
        return Ok(0.0);
    }
    if n <= k + 1 {
        return Err(Error::InsufficientObservations { n, k });
    }
    let (ybar, _) = mean_sd(ds.y().iter().copied());
    let yc = DVector::from_iterator(n, ds.y().iter().map(|v| v - ybar));
    let tss = yc.norm_squared();
    if tss == 0.0 {
        return Err(Error::InvalidDataset("response is constant".into()));
    }
    let mut z = DMatrix::zeros(n, k);
    for (c, j) in subset.indices().enumerate() {
        let col = ds.column(j);
        let (mean, sd) = mean_sd(col.iter().copied());
        if !(sd > 0.0) {
            return Err(Error::DegenerateColumn {
                column: ds.names()[j].clone(),
                subset: ds.subset_label(subset),
            });
        }
        for i in 0..n {
            z[(i, c)] = (col[i] - mean) / sd;
        }
    }
    let fit = least_squares(&z, &yc, || ds.subset_label(subset))?;
    Ok((1.0 - fit.rss / tss).clamp(0.0, 1.0))
}

pub fn score_subset(ds: &Dataset, subset: SubsetMask, prior: HyperGPrior) -> Result<H1ModelScore> {
    let raw = r_squared(ds, subset)?;
    let r2 = if raw > R2_CEILING {
        warn!(
            "R^2 = {raw} for subset {} clipped to {R2_CEILING}",
            ds.subset_label(subset)
        );
        R2_CEILING
    } else {
        raw
    };
    let log_bf = prior.log_bayes_factor(ds.n(), subset.k(), r2)?;
    Ok(H1ModelScore { subset, r2, log_bf })
}

/// Scores every subset in parallel; output order follows the model space.
pub fn h1_scores(ds: &Dataset, space: &ModelSpace, prior: HyperGPrior) -> Result<Vec<H1ModelScore>> {
    space
        .masks()
        .par_iter()
        .map(|&m| score_subset(ds, m, prior))
        .collect()
}

pub fn h1_posterior(ds: &Dataset, space: &ModelSpace, prior: HyperGPrior) -> Result<ModelPosterior> {
    let scores = h1_scores(ds, space, prior)?;
    ModelPosterior::from_log_weights(
        Hypothesis::H1,
        space.masks().to_vec(),
        scores.iter().map(|s| s.log_bf).collect(),
    )
}
