#![allow(dead_code, unused_imports)]

mod reference;

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use superset_core::Dataset;

pub use reference::*;

/// Least squares via the SVD pseudo-inverse of the design `[1, X]`.
pub struct OlsOracle {
    pub intercept: f64,
    pub beta: Vec<f64>,
    pub s2: f64,
    /// `(X'X)^-1` for the full design including the intercept column.
    pub cov_unscaled: DMatrix<f64>,
}

pub fn ols(x: &DMatrix<f64>, y: &[f64]) -> OlsOracle {
    let n = x.nrows();
    let k = x.ncols();
    let mut design = DMatrix::from_element(n, k + 1, 1.0);
    design.view_mut((0, 1), (n, k)).copy_from(x);
    let yv = DVector::from_column_slice(y);
    let pinv = design.clone().pseudo_inverse(1e-14).unwrap();
    let coef = &pinv * &yv;
    let resid = &yv - &design * &coef;
    let cov_unscaled = &pinv * pinv.transpose();
    OlsOracle {
        intercept: coef[0],
        beta: coef.iter().skip(1).copied().collect(),
        s2: resid.norm_squared() / (n - k - 1) as f64,
        cov_unscaled,
    }
}

pub fn diabetes_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/diabetes.tab.txt")
}

/// Diabetes table with `ln Y` as the response.
pub fn diabetes() -> Dataset {
    let text = std::fs::read_to_string(diabetes_path()).expect("diabetes fixture");
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split('\t').map(str::to_string).collect();
    let p = header.len() - 1;
    let mut cols = vec![Vec::new(); p];
    let mut y = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let vals: Vec<f64> = line.split('\t').map(|v| v.trim().parse().unwrap()).collect();
        for j in 0..p {
            cols[j].push(vals[j]);
        }
        y.push(vals[p].ln());
    }
    Dataset::new(y, cols, header[..p].to_vec()).unwrap()
}
