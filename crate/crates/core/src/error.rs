use thiserror::Error;

/// Errors produced by the exact-arithmetic pipeline.
///
/// Everything here is a *domain* error: a precondition the caller can check,
/// or a property of the input data (a pole, a non-quadratic equation, too few
/// terms). Internal invariant violations panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("leading coefficient of the divisor is not a unit of the ring")]
    NonUnitLeading,

    #[error("quotient would have negative valuation (dividend valuation below divisor's)")]
    NotDivisible,

    #[error("{what} is not invertible in this ring")]
    NotInvertible { what: String },

    #[error("series square root requires constant term 1")]
    SqrtConstantTerm,

    #[error("series composition requires the inner series to have zero constant term")]
    ComposeConstantTerm,

    #[error("truncation order too small: need {needed}, have {got}")]
    InsufficientOrder { needed: usize, got: usize },

    #[error("sequence too short: need {needed} terms, have {got}")]
    InsufficientTerms { needed: usize, got: usize },

    #[error("continued fraction has only {got} levels, need {needed}")]
    InsufficientLevels { needed: usize, got: usize },

    #[error("no binding for parameter `{0}`")]
    MissingBinding(String),

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },

    #[error("fixed-point iteration did not stabilize; the equation is not contractive")]
    NonContractive,

    #[error("clearing denominators gives degree {degree} in g, expected exactly 2")]
    NotQuadratic { degree: usize },

    #[error("bad quadratic: {0}")]
    BadQuadratic(&'static str),

    #[error("discriminant constant term is not 1")]
    DiscriminantNotOne,

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix/vector dimensions do not match")]
    DimensionMismatch,

    #[error("unknown family or conjecture id `{0}`")]
    UnknownId(String),

    #[error("self-reference `g` is not allowed in this expression")]
    UnexpectedSelfRef,

    #[error("invalid Somos order {0}: must be 4, 6 or 8")]
    BadSomosOrder(usize),

    #[error("two independently computed routes disagree: {0}")]
    OracleMismatch(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
