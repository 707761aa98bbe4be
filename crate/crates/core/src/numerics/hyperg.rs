use serde::{Deserialize, Serialize};

use super::quadrature::integrate_with_breaks;
use crate::error::{Error, Result};

/// Hyper-g prior `p(g) = ((a - 2) / 2) (1 + g)^(-a/2)` on Zellner's `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperGPrior {
    pub a: f64,
}

impl Default for HyperGPrior {
    fn default() -> Self {
        Self { a: 3.0 }
    }
}

impl HyperGPrior {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 2.0) || !a.is_finite() {
            return Err(Error::Config(format!("hyper-g parameter a must exceed 2, got {a}")));
        }
        Ok(Self { a })
    }

    pub fn log_bayes_factor(&self, n: usize, k: usize, r2: f64) -> Result<f64> {
        log_g_integral(n, k, r2, self.a)
    }
}

const QUAD_TOL: f64 = 1e-10;
const QUAD_MAX_INTERVALS: usize = 4000;
/// Geometric breakpoints `2^-j` toward `w = 0`.
const BREAK_LEVELS: i32 = 30;

/// Log Bayes factor of a `k`-covariate normal linear model against the
/// intercept-only model under the hyper-g prior:
///
/// `log int_0^inf ((a-2)/2) (1+g)^((n-1-k-a)/2) [1 + g(1-R2)]^(-(n-1)/2) dg`.
///
/// With `u = g / (1 + g)` the integrand becomes
/// `((a-2)/2) (1-u)^((k+a)/2 - 2) (1 - R2 u)^(-(n-1)/2)` on `[0, 1)`. A second
/// change of variables `u = 1 - w^2` removes the endpoint singularity at
/// `u = 1` and widens the peak that forms there for large `n` and `R2`:
/// `(a-2) w^(k+a-3) (1 - R2 + R2 w^2)^(-(n-1)/2)` on `[0, 1]`. That integrand
/// is scaled by its maximum and integrated adaptively.
///
/// `k = 0` is the null model itself and returns 0 regardless of `r2`.
pub fn log_g_integral(n: usize, k: usize, r2: f64, a: f64) -> Result<f64> {
    if !(a > 2.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("hyper-g parameter a must exceed 2, got {a}")));
    }
    if k + 1 >= n {
        return Err(Error::InsufficientObservations { n, k });
    }
    if k == 0 {
        return Ok(0.0);
    }
    if r2.is_nan() || r2 < 0.0 {
        return Err(Error::InvalidArgument(format!("R^2 must lie in [0, 1), got {r2}")));
    }
    if r2 >= 1.0 {
        return Err(Error::SaturatedFit { r2 });
    }

    let half_n = 0.5 * (n as f64 - 1.0);
    let power = k as f64 + a - 3.0; // > 0 since k >= 1 and a > 2
    let log_const = (a - 2.0).ln();
    let residual = 1.0 - r2;
    let log_integrand =
        |w: f64| -> f64 { log_const + power * w.ln() - half_n * (residual + r2 * w * w).ln() };

    // Maximum over (0, 1]: the interior stationary point or w = 1.
    let mut shift = log_integrand(1.0);
    let denom = 2.0 * half_n * r2 - power * r2;
    if denom > 0.0 {
        let w2 = power * residual / denom;
        if w2 > 0.0 && w2 < 1.0 {
            shift = shift.max(log_integrand(w2.sqrt()));
        }
    }

    let mut points: Vec<f64> = (0..=BREAK_LEVELS).rev().map(|j| 0.5f64.powi(j)).collect();
    points.insert(0, 0.0);
    let integral = integrate_with_breaks(
        |w| if w > 0.0 { (log_integrand(w) - shift).exp() } else { 0.0 },
        &points,
        0.0,
        QUAD_TOL,
        QUAD_MAX_INTERVALS,
    )?;
    if !(integral.value > 0.0) {
        return Err(Error::Quadrature { estimate: integral.value, error: integral.error });
    }
    Ok(shift + integral.value.ln())
}
