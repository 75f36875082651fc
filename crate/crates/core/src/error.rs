use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("matrix is not antisymmetric (max |A + Aᵀ| = {0:e})")]
    NotAntisymmetric(f64),
    #[error("matrix is not a rotation: {0}")]
    NotRotation(String),
    #[error("allowed axis pairs do not connect all {0} axes")]
    Disconnected(usize),
    #[error("inadmissible covariance: {0}")]
    Inadmissible(String),
    #[error("state is pure in modes {modes:?}; no finite thermal generator exists")]
    Saturated { modes: Vec<usize> },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rotation has eigenvalue -1, matrix logarithm is not unique")]
    LogBranch,
}

pub type Result<T> = std::result::Result<T, Error>;
