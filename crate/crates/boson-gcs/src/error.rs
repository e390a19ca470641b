use thiserror::Error;

/// Errors shared by all simulator components.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix is not unitary: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("particle-number mismatch: {0}")]
    ParticleMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty expansion: a Fock state with S = 0 has no coherent-state expansion")]
    EmptyExpansion,

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("unsupported Renyi index: {0} (only integers >= 2)")]
    UnsupportedAlpha(u32),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
