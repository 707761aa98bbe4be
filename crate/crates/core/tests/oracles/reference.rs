//! Reference implementations used only by tests. Each one follows a
//! different numerical route from the library code it checks. Only std is
//! used here so that other crates' tests can include this file.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `log 2F1(a, 1; c; z)` for `0 <= z < 1` by summing the power series in
/// log space. All terms are positive, so there is no cancellation.
pub fn log_hyp2f1_b1(a: f64, c: f64, z: f64) -> f64 {
    assert!((0.0..1.0).contains(&z));
    if z == 0.0 {
        return 0.0;
    }
    let lz = z.ln();
    // Running log-sum-exp: `max` is the largest term so far, `scaled` the sum
    // of all terms divided by exp(max).
    let mut log_term = 0.0f64;
    let mut max = 0.0f64;
    let mut scaled = 1.0f64;
    let mut j = 0.0;
    loop {
        log_term += ((a + j) / (c + j)).ln() + lz;
        if log_term > max {
            scaled = scaled * (max - log_term).exp() + 1.0;
            max = log_term;
        } else {
            scaled += (log_term - max).exp();
        }
        j += 1.0;
        let ratio = (a + j) / (c + j) * z;
        // Geometric tail bound once the ratio drops below one.
        if ratio < 1.0 && log_term - (1.0 - ratio).ln() < max - 40.0 {
            break;
        }
        assert!(j < 1e9, "series did not converge");
    }
    max + scaled.ln()
}

/// Closed form `(a-2)/(k+a-2) * 2F1((n-1)/2, 1; (k+a)/2; R2)`.
/// The null model (`k = 0`) has `R2 = 0` by definition.
pub fn hyperg_log_bf(n: usize, k: usize, r2: f64, a: f64) -> f64 {
    let r2 = if k == 0 { 0.0 } else { r2 };
    ((a - 2.0) / (k as f64 + a - 2.0)).ln()
        + log_hyp2f1_b1((n as f64 - 1.0) / 2.0, (k as f64 + a) / 2.0, r2)
}

/// `log m*` written exactly as the textbook conjugate formula.
pub fn literal_log_m_star(ys: &[f64], yhat: f64, t2: f64, sigma2: f64) -> f64 {
    let n = ys.len() as f64;
    let tau2 = 1.0 / (n / sigma2 + 1.0 / t2);
    let sum_y: f64 = ys.iter().sum();
    let sum_y2: f64 = ys.iter().map(|v| v * v).sum();
    let mu = tau2 * (sum_y / sigma2 + yhat / t2);
    0.5 * tau2.ln() - n * ((2.0 * PI).sqrt() * sigma2.sqrt()).ln() - 0.5 * t2.ln()
        - 0.5 * (-mu * mu / tau2 + sum_y2 / sigma2 + yhat * yhat / t2)
}

/// The literal formula after shifting every response and the prior mean by
/// `-ybar`, which leaves `m*` unchanged and keeps the terms small.
pub fn centered_literal_log_m(ys: &[f64], yhat: f64, t2: f64, sigma2: f64) -> f64 {
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let shifted: Vec<f64> = ys.iter().map(|y| y - ybar).collect();
    literal_log_m_star(&shifted, yhat - ybar, t2, sigma2)
}

/// `log int prod N(y_i; theta, sigma2) N(theta; yhat, t2) dtheta` by the
/// composite Simpson rule on a wide theta grid.
pub fn theta_quadrature_log_m(ys: &[f64], yhat: f64, t2: f64, sigma2: f64) -> f64 {
    let log_integrand = |theta: f64| {
        let lik: f64 = ys
            .iter()
            .map(|y| -0.5 * (2.0 * PI * sigma2).ln() - (y - theta).powi(2) / (2.0 * sigma2))
            .sum();
        lik - 0.5 * (2.0 * PI * t2).ln() - (theta - yhat).powi(2) / (2.0 * t2)
    };
    let n = ys.len() as f64;
    let tau2 = 1.0 / (n / sigma2 + 1.0 / t2);
    let centre = tau2 * (ys.iter().sum::<f64>() / sigma2 + yhat / t2);
    let half = 40.0 * tau2.sqrt();
    let steps = 20_000;
    let h = 2.0 * half / steps as f64;
    let vals: Vec<f64> = (0..=steps).map(|i| log_integrand(centre - half + i as f64 * h)).collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for (i, v) in vals.iter().enumerate() {
        let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * (v - max).exp();
    }
    max + (s * h / 3.0).ln()
}

/// Grid search on `log sigma2 in [lo, hi]` followed by golden-section
/// refinement between the neighbours of the best grid point.
/// Returns `(argmax sigma2, max value, grid index of the best point)`.
pub fn grid_maximize(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> (f64, f64, usize) {
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| lo + i as f64 * step).collect();
    let vals: Vec<f64> = grid.iter().map(|&l| f(l.exp())).collect();
    let (best, _) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if best == 0 || best == points - 1 {
        return (grid[best].exp(), vals[best], best);
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c.exp()), f(d.exp()));
    for _ in 0..200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d.exp());
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    let (arg, val) = if fc > fd { (c, fc) } else { (d, fd) };
    if val >= vals[best] {
        (arg.exp(), val, best)
    } else {
        (grid[best].exp(), vals[best], best)
    }
}

