use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse {what} from {text:?}: {reason}")]
    Parse {
        what: &'static str,
        text: String,
        reason: String,
    },

    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("model has no terms")]
    EmptyModel,

    #[error("invalid indeterminate subset: {0}")]
    InvalidSubset(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("monomial {monomial} lies outside the box of level counts {levels:?}")]
    BoxViolation { monomial: String, levels: Vec<usize> },

    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(what: &'static str, text: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            text: text.to_string(),
            reason: reason.into(),
        }
    }
}
