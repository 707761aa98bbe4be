//! Replicated-design generator for a quadratic mean in one covariate.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Observations per design point of `x_T`.
    pub replicates: usize,
    pub grid: Vec<f64>,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub noise_sd: f64,
    /// Independent covariates drawn uniformly from `grid`.
    pub distractors: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            replicates: 40,
            grid: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            alpha: 1.0,
            beta1: 1.0,
            beta2: 1.0,
            noise_sd: 0.5,
            distractors: 2,
            seed: 1,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let mut distinct = self.grid.clone();
        distinct.sort_by(|a, b| a.total_cmp(b));
        distinct.dedup();
        if distinct.len() < 2 || distinct.len() != self.grid.len() {
            return Err(Error::Config("grid needs at least two distinct points".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("grid points must be finite".into()));
        }
        if self.replicates < 2 {
            return Err(Error::Config("need at least two replicates per design point".into()));
        }
        if !(self.noise_sd > 0.0) || !self.noise_sd.is_finite() {
            return Err(Error::Config(format!("noise sd must be positive, got {}", self.noise_sd)));
        }
        if self.distractors + 2 > crate::posterior::MAX_ENUMERATION_WIDTH {
            return Err(Error::Config(format!("too many distractors: {}", self.distractors)));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.replicates * self.grid.len()
    }
}

/// Columns `x_T`, `x_U = x_T^2`, `x_D1..`, response
/// `alpha + beta1 x_T + beta2 x_T^2 + N(0, noise_sd^2)`.
pub fn generate(cfg: &SynthConfig) -> Result<Dataset> {
    cfg.validate()?;
    let n = cfg.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x_t: Vec<f64> = (0..cfg.replicates).flat_map(|_| cfg.grid.iter().copied()).collect();
    let x_u: Vec<f64> = x_t.iter().map(|v| v * v).collect();
    let levels = cfg.grid.len() as u64;
    let mut columns = vec![x_t.clone(), x_u];
    let mut names = vec!["x_T".to_string(), "x_U".to_string()];
    for d in 0..cfg.distractors {
        let col = (0..n)
            .map(|_| cfg.grid[(rng.next_u64() % levels) as usize])
            .collect();
        columns.push(col);
        names.push(format!("x_D{}", d + 1));
    }
    let noise = Normal::new(0.0, cfg.noise_sd).map_err(|e| Error::Config(e.to_string()))?;
    let y = x_t
        .iter()
        .map(|&x| cfg.alpha + cfg.beta1 * x + cfg.beta2 * x * x + noise.sample(&mut rng))
        .collect();
    Dataset::new(y, columns, names)
}
