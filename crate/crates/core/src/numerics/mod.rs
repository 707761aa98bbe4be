//! Numerical kernels shared by both regression models.

mod cubic;
mod hyperg;
mod logsumexp;
mod quadrature;

pub use cubic::{solve_cubic, CubicRoots};
pub use hyperg::{log_g_integral, HyperGPrior};
pub use logsumexp::log_sum_exp;
pub use quadrature::{integrate_adaptive, integrate_with_breaks, Integral};
