use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// The state does not have the symmetry its declared particle kind requires.
    #[error("kind error: {0}")]
    Kind(String),

    /// A mixed state has weight outside the symmetric/antisymmetric subspace.
    #[error("support error: {0}")]
    Support(String),

    #[error("dense materialization needs two-copy dimension {required}, cap is {cap}")]
    CapExceeded { required: usize, cap: usize },

    #[error("numerical integrity error: {0}")]
    Integrity(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("contract error: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status: 2 input or validation, 3 kind or support,
    /// 4 resource cap, 5 numerical integrity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Kind(_) | Error::Support(_) => 3,
            Error::CapExceeded { .. } => 4,
            Error::Integrity(_) => 5,
            _ => 2,
        }
    }
}
