use thiserror::Error;

/// Broad category of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: bad file, bad token, ragged rows.
    Parse,
    /// Well-formed input outside an operation's domain.
    Domain,
    /// Two independent computations disagreed. Always a bug.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not square or has ragged rows: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires integer entries")]
    NonIntegerEntries,

    #[error("matrix is nilpotent; polynomial growth rate needs a positive spectral radius")]
    NilpotentInput,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("matrix is singular")]
    Singular,

    #[error("the zero polynomial has no squarefree decomposition")]
    ZeroPolynomial,

    #[error("exterior power degree {k} out of range 1..={n}")]
    ExteriorDegree { k: usize, n: usize },

    #[error("root moduli could not be separated at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("window too short: {len} samples after head drop, need at least {min}")]
    WindowTooShort { len: usize, min: usize },

    #[error("sequence value at n = {n} is not positive and finite")]
    NonPositiveValue { n: usize },

    #[error("pairing vanishes at n = {0}")]
    ZeroPairingAt(usize),

    #[error("every basis pairing sequence vanishes somewhere on the requested range")]
    AllPairingsDegenerate,

    #[error("matrix is not an isometry of the Euler form")]
    NotAnIsometry,

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::Shape(_) => ErrorKind::Parse,
            Error::InternalInconsistency(_) => ErrorKind::Internal,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
