use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),
    #[error("division by zero")]
    DivisionByZero,
    /// A p-adic result would expose a unit known to fewer than one digit.
    #[error("p-adic precision exhausted")]
    PrecisionExhausted,
    #[error("element is not a square")]
    NotASquare,
    #[error("dashed move on slots ({i}, {j}) is degenerate: a_i + a_j = 0")]
    InvalidDashed { i: usize, j: usize },
    #[error("underlying forms are not isometric")]
    NotIsometric,
    #[error("target is not represented by the form")]
    NotRepresented,
    #[error("subsequence extraction produced no terms")]
    EmptyResult,
    #[error("no chain found within depth {0}")]
    NotFound(usize),
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("a trace in the 14-slot presentation vanishes")]
    DegenerateTrace,
    #[error("class has exponent larger than 2^(m-1)")]
    ExponentTooLarge,
    #[error("presentation does not match the input form: {0}")]
    PresentationMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable kebab-case name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid-config",
            Error::DivisionByZero => "division-by-zero",
            Error::PrecisionExhausted => "precision-exhausted",
            Error::NotASquare => "not-a-square",
            Error::InvalidDashed { .. } => "invalid-dashed",
            Error::NotIsometric => "not-isometric",
            Error::NotRepresented => "not-represented",
            Error::EmptyResult => "empty-result",
            Error::NotFound(_) => "not-found",
            Error::InvalidEdge(_) => "invalid-edge",
            Error::DegenerateTrace => "degenerate-trace",
            Error::ExponentTooLarge => "exponent-too-large",
            Error::PresentationMismatch(_) => "presentation-mismatch",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}
