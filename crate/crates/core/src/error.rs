use thiserror::Error;

/// All failure modes of the library.
///
/// Errors split into two families: *malformed input* (unparseable files,
/// bad encodings — CLI exit code 2) and *domain errors* (well-formed data
/// that violates a mathematical precondition — CLI exit code 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error("matrix is not a projection")]
    NotProjection,

    #[error("matrices do not commute")]
    NonCommuting,

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("spectrum is not rational: {0}")]
    IrrationalSpectrum(String),

    #[error("not a valid context: {0}")]
    InvalidContext(String),

    #[error("context is not a member of the poset: {0}")]
    NotInPoset(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("operands live over different posets")]
    PosetMismatch,

    #[error("observable does not belong to the context: {0}")]
    NotInContext(String),

    #[error("assignment is not monotone: {0}")]
    NotMonotone(String),

    #[error("invalid open: {0}")]
    InvalidOpen(String),

    #[error("negative entry where a nonnegative vector is required")]
    NegativeEntry,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid ray set: {0}")]
    InvalidRaySet(String),

    #[error("no atom of the context is valued 1")]
    NoAtomValuedOne,

    #[error("enumeration cap exceeded: more than {0} frame elements")]
    CapExceeded(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Malformed(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable error tag, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed-input",
            Error::Dimension(_) => "dimension-mismatch",
            Error::NotHermitian => "not-hermitian",
            Error::NotProjection => "not-projection",
            Error::NonCommuting => "non-commuting",
            Error::DivisionByZero => "division-by-zero",
            Error::IrrationalSpectrum(_) => "irrational-spectrum",
            Error::InvalidContext(_) => "invalid-context",
            Error::NotInPoset(_) => "not-in-poset",
            Error::InvalidPoset(_) => "invalid-poset",
            Error::PosetMismatch => "poset-mismatch",
            Error::NotInContext(_) => "not-in-context",
            Error::NotMonotone(_) => "not-monotone",
            Error::InvalidOpen(_) => "invalid-open",
            Error::NegativeEntry => "negative-entry",
            Error::InvalidState(_) => "invalid-state",
            Error::InvalidRaySet(_) => "invalid-ray-set",
            Error::NoAtomValuedOne => "no-atom-valued-one",
            Error::CapExceeded(_) => "cap-exceeded",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
