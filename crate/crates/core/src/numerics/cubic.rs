use crate::error::{Error, Result};

/// Real roots of `a1 x^3 + a2 x^2 + a3 x + a4`, ascending, repeated roots
/// collapsed to one entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicRoots {
    pub roots: Vec<f64>,
    /// `|p(r)|` at each root.
    pub residuals: Vec<f64>,
}

impl CubicRoots {
    pub fn positive(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().copied().filter(|&r| r > 0.0)
    }
}

/// Relative residual accepted for a reported root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy)]
struct Poly([f64; 4]);

impl Poly {
    fn eval(self, x: f64) -> f64 {
        let [a, b, c, d] = self.0;
        ((a * x + b) * x + c) * x + d
    }

    fn deriv(self, x: f64) -> f64 {
        let [a, b, c, _] = self.0;
        (3.0 * a * x + 2.0 * b) * x + c
    }

    /// `sum |a_i x^i|`, the size of the terms that cancel at a root.
    fn scale(self, x: f64) -> f64 {
        let [a, b, c, d] = self.0;
        (a * x * x * x).abs() + (b * x * x).abs() + (c * x).abs() + d.abs()
    }

    fn relative_residual(self, x: f64) -> f64 {
        let scale = self.scale(x);
        if scale == 0.0 {
            0.0
        } else {
            self.eval(x).abs() / scale
        }
    }

    fn acceptable(self, x: f64) -> bool {
        self.relative_residual(x) <= RESIDUAL_TOLERANCE
    }

    /// Quotient by `(x - r)`, computed from the leading coefficient down.
    fn deflate_forward(self, r: f64) -> [f64; 3] {
        let [a, b, c, _] = self.0;
        let q1 = b + r * a;
        [a, q1, c + r * q1]
    }

    /// Quotient by `(x - r)`, computed from the constant term up. Stable
    /// when `r` is the largest root in magnitude.
    fn deflate_backward(self, r: f64) -> [f64; 3] {
        let [_, b, c, d] = self.0;
        let q0 = -d / r;
        let q1 = (q0 - c) / r;
        [(q1 - b) / r, q1, q0]
    }

    /// Newton steps, keeping the iterate with the smallest residual.
    fn polish(self, x0: f64) -> f64 {
        let mut best = x0;
        let mut best_res = self.eval(x0).abs();
        let mut x = x0;
        for _ in 0..12 {
            let d = self.deriv(x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let next = x - self.eval(x) / d;
            if !next.is_finite() {
                break;
            }
            let res = self.eval(next).abs();
            if res < best_res {
                best = next;
                best_res = res;
            }
            if next == x || res == 0.0 {
                break;
            }
            x = next;
        }
        best
    }
}

/// Roots of `a x^2 + b x + c` with `a != 0`. A slightly negative
/// discriminant is read as a double root.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    let slack = 1e-12 * (b * b).max((4.0 * a * c).abs());
    if disc < -slack {
        return Vec::new();
    }
    if disc <= slack {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

fn quotient_roots([q2, q1, q0]: [f64; 3]) -> Vec<f64> {
    if q2 != 0.0 && q2.is_finite() {
        quadratic_roots(q2, q1, q0)
    } else if q1 != 0.0 && q1.is_finite() {
        vec![-q0 / q1]
    } else {
        Vec::new()
    }
}

/// Real roots of the monic cubic `w^3 + b w^2 + c w + d` with coefficients
/// of order one, as `(certain, tentative)`. Tentative roots come from
/// deflation and must pass the residual check.
fn monic_cubic_roots(b: f64, c: f64, d: f64) -> (Vec<f64>, Vec<f64>) {
    let shift = b / 3.0;
    let p = c - b * shift;
    let q = 2.0 * shift * shift * shift - shift * c + d;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    if disc <= 0.0 {
        if third_p == 0.0 {
            return (vec![-shift], Vec::new());
        }
        let r = (-third_p).sqrt();
        let cos_phi = (-half_q / (r * r * r)).clamp(-1.0, 1.0);
        let phi = cos_phi.acos();
        let tau = std::f64::consts::TAU;
        let roots = (0..3)
            .map(|j| 2.0 * r * (phi / 3.0 - tau * j as f64 / 3.0).cos() - shift)
            .collect();
        return (roots, Vec::new());
    }

    let a = -half_q.signum() * (half_q.abs() + disc.sqrt()).cbrt();
    let v = if a == 0.0 { 0.0 } else { a - third_p / a };
    let w0 = v - shift;
    // Deflate to catch a double root hidden by rounding in `disc`.
    let lin = b + w0;
    let cons = c + w0 * lin;
    (vec![w0], quadratic_roots(1.0, lin, cons))
}

/// Merges roots closer than `1e-7` relative, with an absolute floor tied to
/// the overall root magnitude.
fn collapse(mut roots: Vec<f64>, magnitude: f64) -> Vec<f64> {
    roots.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(&prev) if (r - prev).abs() <= 1e-7 * r.abs().max(prev.abs()) + 1e-14 * magnitude => {}
            _ => out.push(r),
        }
    }
    out
}

/// All real roots of `a1 x^3 + a2 x^2 + a3 x + a4 = 0`.
///
/// Degrades to the quadratic or linear case when leading coefficients are
/// exactly zero. The cubic case rescales to a monic polynomial with unit-size
/// coefficients and solves it by Cardano or the trigonometric form. The
/// largest root found that way is polished and divided out; the remaining
/// quadratic gives the smaller roots to full relative precision. Every
/// candidate is polished with Newton steps on the original coefficients and
/// kept only if its relative residual is at most [`RESIDUAL_TOLERANCE`].
pub fn solve_cubic(a1: f64, a2: f64, a3: f64, a4: f64) -> Result<CubicRoots> {
    if [a1, a2, a3, a4].iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite cubic coefficient".into()));
    }
    if a1 == 0.0 && a2 == 0.0 && a3 == 0.0 && a4 == 0.0 {
        return Err(Error::InvalidPolynomial);
    }
    let poly = Poly([a1, a2, a3, a4]);

    if a1 == 0.0 {
        let (roots, magnitude) = if a2 != 0.0 {
            let r = quadratic_roots(a2, a3, a4);
            let m = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            (r, m)
        } else if a3 != 0.0 {
            let r = -a4 / a3;
            (vec![r], r.abs())
        } else {
            (Vec::new(), 0.0)
        };
        let polished = roots.into_iter().map(|r| poly.polish(r)).collect();
        return Ok(finish(poly, collapse(polished, magnitude)));
    }

    let (b, c, d) = (a2 / a1, a3 / a1, a4 / a1);
    let s = b.abs().max(c.abs().sqrt()).max(d.abs().cbrt());
    if s == 0.0 {
        return Ok(finish(poly, vec![0.0]));
    }
    let (certain, tentative) = monic_cubic_roots(b / s, c / (s * s), d / (s * s * s));
    let approx: Vec<f64> = certain.iter().chain(&tentative).map(|w| w * s).collect();

    // The scaled solve is accurate relative to the largest root only. Smaller
    // roots come from the quadratic left after dividing out that root.
    let anchor = approx.iter().copied().fold(0.0f64, |acc, r| if r.abs() > acc.abs() { r } else { acc });
    let anchor = poly.polish(anchor);
    let mut candidates = vec![anchor];
    if anchor != 0.0 {
        candidates.extend(quotient_roots(poly.deflate_backward(anchor)));
    }
    candidates.extend(quotient_roots(poly.deflate_forward(anchor)));
    candidates.extend(approx);

    let polished: Vec<f64> = candidates.into_iter().filter(|r| r.is_finite()).map(|r| poly.polish(r)).collect();
    let mut accepted: Vec<f64> = polished.iter().copied().filter(|&r| poly.acceptable(r)).collect();
    if accepted.is_empty() {
        // A real cubic always has a real root; keep the best candidate.
        let best = polished
            .iter()
            .copied()
            .min_by(|x, y| poly.relative_residual(*x).total_cmp(&poly.relative_residual(*y)))
            .ok_or_else(|| Error::Invariant("cubic solver produced no candidates".into()))?;
        accepted.push(best);
    }
    Ok(finish(poly, collapse(accepted, s)))
}

fn finish(poly: Poly, roots: Vec<f64>) -> CubicRoots {
    let residuals = roots.iter().map(|&r| poly.eval(r).abs()).collect();
    CubicRoots { roots, residuals }
}
