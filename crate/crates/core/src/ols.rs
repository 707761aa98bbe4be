use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest accepted condition number of the Gram matrix `Z'Z`.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Least-squares fit of `y` on the columns of `z` (no intercept column).
#[derive(Debug, Clone)]
pub(crate) struct LeastSquares {
    pub beta: DVector<f64>,
    pub rss: f64,
    /// `(Z'Z)^-1 = R^-1 R^-T` from the thin QR factor.
    pub gram_inv: DMatrix<f64>,
}

pub(crate) fn least_squares(
    z: &DMatrix<f64>,
    y: &DVector<f64>,
    subset_label: impl FnOnce() -> String,
) -> Result<LeastSquares> {
    let k = z.ncols();
    debug_assert!(z.nrows() > k);
    let qr = z.clone().qr();
    let r = qr.r();
    let singular = r.singular_values();
    let smax = singular.max();
    let smin = singular.min();
    let condition = if smin > 0.0 { (smax / smin).powi(2) } else { f64::INFINITY };
    if !(condition < MAX_GRAM_CONDITION) {
        return Err(Error::CollinearSubset { subset: subset_label(), condition });
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let rhs = qty.rows(0, k).into_owned();
    let beta = r
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::Invariant("triangular solve failed".into()))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::Invariant("triangular inverse failed".into()))?;
    let gram_inv = &r_inv * r_inv.transpose();
    let resid = y - z * &beta;
    Ok(LeastSquares { beta, rss: resid.norm_squared(), gram_inv })
}
