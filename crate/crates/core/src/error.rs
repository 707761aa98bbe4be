use thiserror::Error;

/// Broad classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fold count {m} for {n} observations (need 2 <= m <= n)")]
    InvalidFoldCount { m: usize, n: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("column '{column}' has zero training variance in subset {subset}")]
    DegenerateColumn { column: String, subset: String },

    #[error("subset {subset} is collinear (Gram condition number {condition:.3e})")]
    CollinearSubset { subset: String, condition: f64 },

    #[error("saturated fit: R^2 = {r2} (must be < 1)")]
    SaturatedFit { r2: f64 },

    #[error("insufficient observations: n = {n}, k = {k} (need n - 1 > k)")]
    InsufficientObservations { n: usize, k: usize },

    #[error("insufficient training rows: |D0| = {d0}, k = {k} (need |D0| > k + 1)")]
    InsufficientTraining { d0: usize, k: usize },

    #[error("polynomial has all-zero coefficients")]
    InvalidPolynomial,

    #[error("local prior variance collapsed (training residual variance is zero)")]
    DegeneratePrior,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("subset {subset}, fold {fold}: {source}")]
    Fold {
        subset: String,
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidFoldCount { .. } | Error::Config(_) | Error::InvalidArgument(_) => {
                ErrorKind::Config
            }
            Error::InvalidDataset(_)
            | Error::DegenerateColumn { .. }
            | Error::InsufficientObservations { .. }
            | Error::InsufficientTraining { .. } => ErrorKind::Data,
            Error::Fold { source, .. } => source.kind(),
            _ => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
