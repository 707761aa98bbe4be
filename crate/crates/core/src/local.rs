//! Local-constant alternative model.
//!
//! Each distinct covariate value `x` in a test fold gets its own mean
//! `theta_x ~ N(yhat_x, t_x^2)`, where the prior comes from an OLS fit on the
//! training fold, and its own error variance `sigma_x^2`, which is set by
//! maximizing the conditional marginal likelihood (empirical Bayes). Fold
//! results are combined as a per-observation geometric mean, averaged over
//! folds and raised to the power `n`.

use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{group_distinct, standardize_fold, Dataset, FoldPlan, LocalGroup, StandardizedFold, SubsetMask};
use crate::error::{Error, Result};
use crate::numerics::{log_sum_exp, solve_cubic};
use crate::ols::least_squares;
use crate::posterior::{Hypothesis, ModelPosterior, ModelSpace};

/// Training residual sums of squares at or below this fraction of the
/// total sum of squares count as an exact fit.
pub const EXACT_FIT_TOLERANCE: f64 = 1e-20;

/// Candidates whose log likelihoods differ by at most this are tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// OLS summary of one training fold.
#[derive(Debug, Clone)]
pub struct FoldFit {
    pub ybar0: f64,
    pub beta: DVector<f64>,
    pub gram_inv: DMatrix<f64>,
    /// Residual variance with denominator `|D0| - k - 1`.
    pub s2: f64,
    pub d0: usize,
}

impl FoldFit {
    pub fn k(&self) -> usize {
        self.beta.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.s2 == 0.0
    }
}

pub fn fit_fold(fold: &StandardizedFold, ds: &Dataset) -> Result<FoldFit> {
    let d0 = fold.train_ids.len();
    let k = fold.k();
    if d0 <= k + 1 {
        return Err(Error::InsufficientTraining { d0, k });
    }
    let y = DVector::from_iterator(d0, fold.train_ids.iter().map(|&i| ds.y()[i]));
    let ybar0 = y.mean();
    let tss: f64 = y.iter().map(|v| (v - ybar0).powi(2)).sum();

    let (beta, gram_inv, rss) = if k == 0 {
        (DVector::zeros(0), DMatrix::zeros(0, 0), tss)
    } else {
        let fit = least_squares(&fold.z_train, &y, || ds.subset_label(fold.subset))?;
        let resid = y.add_scalar(-ybar0) - &fold.z_train * &fit.beta;
        (fit.beta, fit.gram_inv, resid.norm_squared())
    };

    let s2 = if rss <= EXACT_FIT_TOLERANCE * tss {
        warn!(
            "training fit is exact for subset {} in fold {}; local prior is degenerate",
            ds.subset_label(fold.subset),
            fold.fold
        );
        0.0
    } else {
        rss / (d0 - k - 1) as f64
    };
    Ok(FoldFit { ybar0, beta, gram_inv, s2, d0 })
}

/// Normal prior on the local mean at one covariate value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalPrior {
    pub yhat: f64,
    pub t2: f64,
}

/// `yhat = ybar0 + x'beta`, `t2 = s2 (1/|D0| + x' (Z'Z)^-1 x)`.
pub fn local_prior(fit: &FoldFit, x_std: &[f64]) -> Result<LocalPrior> {
    if x_std.len() != fit.k() {
        return Err(Error::InvalidArgument(format!(
            "covariate vector has length {}, fit has k = {}",
            x_std.len(),
            fit.k()
        )));
    }
    if fit.is_degenerate() {
        return Err(Error::DegeneratePrior);
    }
    let x = DVector::from_column_slice(x_std);
    let yhat = fit.ybar0 + fit.beta.dot(&x);
    let quad = if fit.k() == 0 { 0.0 } else { x.dot(&(&fit.gram_inv * &x)) };
    let t2 = fit.s2 * (1.0 / fit.d0 as f64 + quad);
    Ok(LocalPrior { yhat, t2 })
}

/// Log of the conditional marginal likelihood `m*` of a group at a fixed
/// `sigma2 > 0`.
///
/// Evaluated through the factorization into a within-group term and the
/// predictive density of the group mean,
/// `N(ybar; yhat, t2 + sigma2/n)`, which avoids the cancellation between
/// `sum y^2 / sigma2` and `mu^2 / tau^2` for small `sigma2`.
pub fn log_cond_ml(group: &LocalGroup, prior: LocalPrior, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::Domain(format!("sigma^2 must be positive and finite, got {sigma2}")));
    }
    if !(prior.t2 > 0.0) {
        return Err(Error::Domain(format!("prior variance must be positive, got {}", prior.t2)));
    }
    let n = group.n_x as f64;
    let within = -0.5 * (n - 1.0) * (2.0 * PI * sigma2).ln()
        - 0.5 * n.ln()
        - 0.5 * n * group.s2_y / sigma2;
    let v = prior.t2 + sigma2 / n;
    let dev2 = (group.ybar_x - prior.yhat).powi(2);
    Ok(within - 0.5 * (2.0 * PI * v).ln() - 0.5 * dev2 / v)
}

/// Limit of `log m*` as `sigma2 -> 0` for a group with identical responses.
pub fn boundary_log_ml(group: &LocalGroup, prior: LocalPrior) -> f64 {
    let dev2 = (group.ybar_x - prior.yhat).powi(2);
    -0.5 * (2.0 * PI * prior.t2).ln() - 0.5 * dev2 / prior.t2
}

/// Coefficients `(a1, a2, a3, a4)` of the cubic in `sigma2` whose positive
/// roots are the stationary points of `m*`.
pub fn cubic_coefficients(n_x: usize, s2_y: f64, t2: f64, dev2: f64) -> [f64; 4] {
    let n = n_x as f64;
    let t4 = t2 * t2;
    [
        -1.0 / t4,
        (1.0 - 2.0 * n) / t2 + (s2_y + dev2) / t4,
        -n * n + n + 2.0 * n * s2_y / t2,
        n * n * s2_y,
    ]
}

/// Empirical-Bayes maximum of `m*` over `sigma2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMLResult {
    /// Maximizing `sigma2`; 0 stands for the `sigma2 -> 0` limit.
    pub sigma2_hat: f64,
    pub log_ml: f64,
    /// Every evaluated `(sigma2, log m*)` pair.
    pub candidates: Vec<(f64, f64)>,
}

/// Maximizes `m*` over `sigma2 in [0, inf)`.
///
/// With `s2_y > 0` the likelihood vanishes at both ends, so the maximum is at
/// one of the positive roots of the stationarity cubic. With `s2_y = 0` the
/// `sigma2 -> 0` limit is a candidate, plus `sigma2 = dev2 - t2` when
/// `dev2 > t2` (and, for groups of two or more, any positive cubic roots).
pub fn maximize_local_ml(group: &LocalGroup, prior: LocalPrior) -> Result<LocalMLResult> {
    if !(prior.t2 > 0.0) {
        return Err(Error::Domain(format!("prior variance must be positive, got {}", prior.t2)));
    }
    let dev2 = (group.ybar_x - prior.yhat).powi(2);
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let push_interior = |s: f64, out: &mut Vec<(f64, f64)>| -> Result<()> {
        if s > 0.0 && s.is_finite() && !out.iter().any(|c| c.0 == s) {
            out.push((s, log_cond_ml(group, prior, s)?));
        }
        Ok(())
    };

    let cubic_roots = || -> Result<Vec<f64>> {
        let [a1, a2, a3, a4] = cubic_coefficients(group.n_x, group.s2_y, prior.t2, dev2);
        Ok(solve_cubic(a1, a2, a3, a4)?.positive().collect())
    };

    if group.s2_y > 0.0 {
        for r in cubic_roots()? {
            push_interior(r, &mut candidates)?;
        }
    } else {
        candidates.push((0.0, boundary_log_ml(group, prior)));
        if dev2 > prior.t2 {
            push_interior(dev2 - prior.t2, &mut candidates)?;
        }
        if group.n_x > 1 {
            for r in cubic_roots()? {
                push_interior(r, &mut candidates)?;
            }
        }
    }

    let mut best: Option<(f64, f64)> = None;
    for &(s, v) in candidates.iter().filter(|c| c.1.is_finite()) {
        best = match best {
            None => Some((s, v)),
            Some((_, bv)) if v > bv + TIE_TOLERANCE => Some((s, v)),
            Some((bs, bv)) if (v - bv).abs() <= TIE_TOLERANCE && s < bs => Some((s, v.max(bv))),
            keep => keep,
        };
    }
    let (sigma2_hat, log_ml) = best.ok_or_else(|| {
        Error::Invariant(format!(
            "no finite candidate for group n_x = {}, s2_y = {}, t2 = {}",
            group.n_x, group.s2_y, prior.t2
        ))
    })?;
    let log_ml = candidates.iter().map(|c| c.1).fold(log_ml, f64::max);
    Ok(LocalMLResult { sigma2_hat, log_ml, candidates })
}

/// `(1/|D1|) * sum over distinct-x groups of log m` for one fold.
pub fn fold_log_ml_per_obs(fold: &StandardizedFold, ds: &Dataset) -> Result<f64> {
    let fit = fit_fold(fold, ds)?;
    let mut total = 0.0;
    for group in group_distinct(fold, ds) {
        let prior = local_prior(&fit, &group.x_std)?;
        total += maximize_local_ml(&group, prior)?.log_ml;
    }
    Ok(total / fold.test_ids.len() as f64)
}

/// Per-fold values `L_1..L_m` for one subset.
pub fn fold_log_mls(ds: &Dataset, subset: SubsetMask, plan: &FoldPlan) -> Result<Vec<f64>> {
    (0..plan.m())
        .map(|f| {
            standardize_fold(ds, subset, plan, f)
                .and_then(|fold| fold_log_ml_per_obs(&fold, ds))
                .map_err(|e| match e {
                    Error::DegeneratePrior => e,
                    other => Error::Fold {
                        subset: ds.subset_label(subset),
                        fold: f,
                        source: Box::new(other),
                    },
                })
        })
        .collect()
}

/// `n * log(mean_f exp(L_f))`. A degenerate training fit scores `-inf`.
pub fn h0_log_marginal(ds: &Dataset, subset: SubsetMask, plan: &FoldPlan) -> Result<f64> {
    match fold_log_mls(ds, subset, plan) {
        Ok(values) => {
            let mean = log_sum_exp(&values)? - (plan.m() as f64).ln();
            Ok(ds.n() as f64 * mean)
        }
        Err(Error::DegeneratePrior) => {
            warn!("subset {} scored -inf: degenerate local prior", ds.subset_label(subset));
            Ok(f64::NEG_INFINITY)
        }
        Err(e) => Err(e),
    }
}

pub fn h0_posterior(ds: &Dataset, space: &ModelSpace, plan: &FoldPlan) -> Result<ModelPosterior> {
    let log_weights = space
        .masks()
        .par_iter()
        .map(|&m| h0_log_marginal(ds, m, plan))
        .collect::<Result<Vec<_>>>()?;
    ModelPosterior::from_log_weights(Hypothesis::H0, space.masks().to_vec(), log_weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::make_folds;

    fn prior(yhat: f64, t2: f64) -> LocalPrior {
        LocalPrior { yhat, t2 }
    }

    #[test]
    fn single_observation_predictive() {
        let g = LocalGroup::from_responses(&[0.0]);
        let v = log_cond_ml(&g, prior(0.0, 1.0), 1.0).unwrap();
        assert!((v - (1.0 / (2.0 * PI * 2.0).sqrt()).ln()).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_sigma2() {
        let g = LocalGroup::from_responses(&[0.0]);
        assert!(matches!(log_cond_ml(&g, prior(0.0, 1.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(log_cond_ml(&g, prior(0.0, 1.0), -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(cubic_coefficients(1, 0.0, 1.0, 4.0), [-1.0, 3.0, 0.0, 0.0]);
        assert_eq!(cubic_coefficients(2, 1.0, 1.0, 0.0), [-1.0, -2.0, 2.0, 4.0]);
        assert!(cubic_coefficients(3, 0.2, 0.5, 1.0)[3] > 0.0);
    }

    #[test]
    fn boundary_maximum_when_prior_is_centered() {
        let g = LocalGroup::from_responses(&[1.5]);
        let r = maximize_local_ml(&g, prior(1.5, 1.0)).unwrap();
        assert_eq!(r.sigma2_hat, 0.0);
        assert!((r.log_ml - (-0.5 * (2.0 * PI).ln())).abs() < 1e-14);
        assert!((r.log_ml + 0.918_938_533_204_672_7).abs() < 1e-12);
    }

    #[test]
    fn interior_maximum_beats_boundary() {
        let g = LocalGroup::from_responses(&[2.0]);
        let r = maximize_local_ml(&g, prior(0.0, 1.0)).unwrap();
        assert!((r.sigma2_hat - 3.0).abs() < 1e-14);
        assert!((r.log_ml - 0.1210f64.ln()).abs() < 1e-3);
        assert!((r.log_ml - (-0.5 * (8.0 * PI).ln() - 0.5)).abs() < 1e-14);
        assert_eq!(r.candidates.len(), 2);
    }

    #[test]
    fn positive_variance_uses_cubic_root() {
        let g = LocalGroup::from_responses(&[-1.0, 1.0]);
        let r = maximize_local_ml(&g, prior(0.0, 1.0)).unwrap();
        assert!(r.sigma2_hat > 0.0);
        let [a1, a2, a3, a4] = cubic_coefficients(2, 1.0, 1.0, 0.0);
        let s = r.sigma2_hat;
        assert!((((a1 * s + a2) * s + a3) * s + a4).abs() < 1e-10);
    }

    #[test]
    fn fit_fold_null_subset() {
        let ds = Dataset::new(
            vec![1.0, 2.0, 3.0, 10.0],
            vec![vec![0.0, 1.0, 2.0, 3.0]],
            vec!["x".into()],
        )
        .unwrap();
        let plan = FoldPlan::from_assignment(2, 0, vec![0, 0, 0, 1]).unwrap();
        let fold = standardize_fold(&ds, SubsetMask::empty(1), &plan, 1).unwrap();
        let fit = fit_fold(&fold, &ds).unwrap();
        assert_eq!(fit.ybar0, 2.0);
        assert_eq!(fit.s2, 1.0);
        assert_eq!(fit.k(), 0);
        let p = local_prior(&fit, &[]).unwrap();
        assert_eq!(p, LocalPrior { yhat: 2.0, t2: 1.0 / 3.0 });
    }

    #[test]
    fn null_prior_variance() {
        let fit = FoldFit {
            ybar0: 2.0,
            beta: DVector::zeros(0),
            gram_inv: DMatrix::zeros(0, 0),
            s2: 1.0,
            d0: 4,
        };
        assert_eq!(local_prior(&fit, &[]).unwrap(), LocalPrior { yhat: 2.0, t2: 0.25 });
    }

    #[test]
    fn exact_training_fit_is_degenerate() {
        let x: Vec<f64> = (0..8).map(f64::from).collect();
        let ds = Dataset::new(x.clone(), vec![x], vec!["x".into()]).unwrap();
        let plan = FoldPlan::from_assignment(2, 0, vec![0, 0, 0, 0, 0, 0, 1, 1]).unwrap();
        let m = SubsetMask::from_indices(1, &[0]).unwrap();
        let fold = standardize_fold(&ds, m, &plan, 1).unwrap();
        let fit = fit_fold(&fold, &ds).unwrap();
        assert!(fit.is_degenerate());
        assert!(matches!(local_prior(&fit, &[0.0]), Err(Error::DegeneratePrior)));
        let plan = make_folds(8, 2, 1).unwrap();
        assert_eq!(h0_log_marginal(&ds, m, &plan).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn insufficient_training_rows() {
        let ds = Dataset::new(
            vec![1.0, 2.0, 0.5, 4.0],
            vec![vec![0.0, 1.0, 3.0, 3.0], vec![2.0, 1.0, 1.0, 0.0]],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let plan = FoldPlan::from_assignment(2, 0, vec![0, 0, 0, 1]).unwrap();
        let fold = standardize_fold(&ds, SubsetMask::from_indices(2, &[0, 1]).unwrap(), &plan, 1).unwrap();
        assert!(matches!(fit_fold(&fold, &ds), Err(Error::InsufficientTraining { d0: 3, k: 2 })));
    }
}
