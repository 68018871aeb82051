use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("not a prime place: {0}")]
    NotAPlace(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("window does not contain the requested exponent: {0}")]
    OutsideWindow(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("declared support does not factor the input: {0}")]
    UnsupportedFactorization(String),
    #[error("degenerate pairing: {0}")]
    DegeneratePairing(String),
    #[error("did not stabilize: {0}")]
    NoStabilization(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Errors caused by malformed input rather than by a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Validation(_) | Error::Io(_))
    }
}
