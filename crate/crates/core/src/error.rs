use thiserror::Error;

use crate::algebra::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(ValidationReport),

    #[error("invalid pointed pair: {0}")]
    InvalidPair(String),

    #[error("subspace is not an ideal of the algebra")]
    NotAnIdeal,

    #[error("element is not in the maximal ideal")]
    NotInMaximalIdeal,

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),

    #[error("malformed catalog parameters: {0}")]
    MalformedParams(String),

    #[error("malformed lambda matrix: {0}")]
    MalformedLambda(String),

    #[error("hypersurface degree {0} is below 2")]
    DegreeTooLow(usize),

    #[error("form arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("the zero vector is not a projective point")]
    ZeroPoint,

    #[error("point is not on the hypersurface")]
    NotOnHypersurface,

    #[error("bilinear form has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("kernel of the form is not contained in W")]
    KernelNotInW,

    #[error("invalid bilinear triple: {0}")]
    InvalidTriple(String),

    #[error("not representable over Q(i): {0}")]
    NotRepresentable(String),

    #[error("lambda data mismatch: {0}")]
    LambdaMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("schema violation: {0}")]
    Schema(String),
}
