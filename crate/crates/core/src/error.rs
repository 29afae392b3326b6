use thiserror::Error;

/// Failure modes shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank deficient: numerical rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("no convergence in {0}")]
    NoConvergence(&'static str),

    #[error("vector norm {0} deviates from 1")]
    BadNorm(f64),

    #[error("singular matrix ({0})")]
    Singular(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("basis is not orthonormal: |Q^H Q - I| = {0:e}")]
    NotOrthonormal(f64),

    #[error("empty list")]
    EmptyList,

    #[error("zero vector")]
    ZeroVector,

    #[error("not an eigenpair: residual {residual:e} exceeds {tolerance:e}")]
    NotAnEigenpair { residual: f64, tolerance: f64 },

    #[error("B v vanishes")]
    ZeroBv,

    #[error("eigenvalue is zero")]
    ZeroEigenvalue,

    #[error("eigenvector is orthogonal to the subspace")]
    OrthogonalSubspace,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported Matrix Market field: {0}")]
    UnsupportedField(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
