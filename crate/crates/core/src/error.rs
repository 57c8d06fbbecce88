use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sup/inf over an empty sequence")]
    EmptySequence,

    #[error("NaN is not an extended real")]
    NotANumber,

    #[error("invalid extended real {0:?}: expected a number, \"inf\" or \"-inf\"")]
    InvalidToken(String),

    #[error("a finite set must have at least one label")]
    EmptySet,

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown label {label:?} in set {set}")]
    UnknownLabel { label: String, set: String },

    #[error("domain mismatch: {context}")]
    DomainMismatch { context: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("table shape mismatch: {0}")]
    Shape(String),

    #[error("problem file: {0}")]
    Problem(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn mismatch(context: impl Into<String>) -> Self {
        Error::DomainMismatch {
            context: context.into(),
        }
    }
}
