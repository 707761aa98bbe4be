use crate::error::{Error, Result};

/// `log(sum(exp(v)))` without overflow. Accepts `-inf` entries.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    let max = values
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidArgument("log_sum_exp of an empty list".into()))?;
    if max == f64::NEG_INFINITY || max == f64::INFINITY {
        return Ok(max);
    }
    if max.is_nan() {
        return Err(Error::InvalidArgument("log_sum_exp of NaN".into()));
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    Ok(max + sum.ln())
}
