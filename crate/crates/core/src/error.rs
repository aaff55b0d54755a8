use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("letter index {0} is not a generator of this model")]
    LetterOutOfRange(u8),
    #[error("exponent overflow while normalising")]
    Overflow,
    #[error("enumeration truncated at radius {radius}: {elements} elements exceed cap {cap}")]
    Truncated {
        radius: usize,
        elements: usize,
        cap: usize,
    },
    #[error("elementary: {0}")]
    Elementary(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("germs are not comparable: {0}")]
    GermMismatch(String),
    #[error("cone types did not stabilise: {0}")]
    NonStabilization(String),
    #[error("no candidate found within budget: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    /// True for failures of a verification step, as opposed to bad input.
    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            Error::Audit(_) | Error::Elementary(_) | Error::NonStabilization(_) | Error::NotFound(_)
        )
    }
}
