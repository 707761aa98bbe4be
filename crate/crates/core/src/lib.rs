//! Superset model probabilities for regression variable selection.
//!
//! Two posteriors over covariate subsets are computed: one under a normal
//! linear model with a hyper-g prior ([`linear`]) and one under a
//! cross-validated local-constant model whose variance parameters are set by
//! empirical Bayes ([`local`]). [`superset`] combines them into the
//! probability that the linear model picks a strict superset of the
//! covariates the local model picks.

pub mod data;
pub mod error;
pub mod linear;
pub mod local;
pub mod numerics;
mod ols;
pub mod pipeline;
pub mod posterior;
pub mod superset;
pub mod synth;

pub use data::{
    group_distinct, make_folds, precision_partition, precision_split, standardize_fold, Dataset,
    FoldPlan, LocalGroup, PrecisionPartition, StandardizedFold, SubsetMask, FOLD_PRNG,
};
pub use error::{Error, ErrorKind, Result};
pub use linear::{h1_posterior, h1_scores, r_squared, score_subset, H1ModelScore};
pub use local::{
    cubic_coefficients, fit_fold, fold_log_ml_per_obs, fold_log_mls, h0_log_marginal, h0_posterior,
    local_prior, log_cond_ml, maximize_local_ml, FoldFit, LocalMLResult, LocalPrior,
};
pub use numerics::{log_g_integral, log_sum_exp, solve_cubic, CubicRoots, HyperGPrior};
pub use pipeline::{analyze, AnalysisOutcome, AnalysisSettings};
pub use posterior::{Hypothesis, ModelPosterior, ModelSpace};
pub use superset::{
    is_strict_superset, is_superset, superset_probability, Inclusion, PairContribution,
    SupersetReport,
};
pub use synth::{generate, SynthConfig};
