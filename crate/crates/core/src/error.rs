use thiserror::Error;

/// Errors raised across the crate.
///
/// Each variant maps onto one of the CLI exit codes: property failures
/// exit with 1, invalid input with 2 and resource guards with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not symplectic: {0}")]
    NotSymplectic(String),

    #[error("not invertible: {a} modulo {m}")]
    NotInvertible { a: u64, m: u64 },

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("ramified/non-separable reduction modulo {p}")]
    Ramified { p: u64 },

    #[error("not split modulo {p}")]
    NotSplit { p: u64 },

    #[error("non-separable characteristic polynomial")]
    NonSeparable,

    #[error("scar regime: {0}")]
    ScarRegime(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("property failed: {0}")]
    PropertyFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PropertyFailed(_) | Error::Numerical(_) => 1,
            Error::ResourceGuard(_) | Error::BoundExceeded(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
