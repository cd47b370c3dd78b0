use thiserror::Error;

use crate::algebra::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u32),
    #[error("{value} is not {p}-local")]
    NotPLocal { value: String, p: u32 },
    #[error("expected a scalar over {expected}, found one over {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("elements live in different rings")]
    RingMismatch,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("negative power of non-invertible `{0}`")]
    NegativeExponent(String),
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("degree mismatch for `{generator}`: expected {expected}, found {found}")]
    DegreeMismatch {
        generator: String,
        expected: i32,
        found: i32,
    },
    #[error("rewriting exceeded {0} steps; the rewrite system is malformed")]
    RewriteBudget(usize),
    #[error("generator `{0}` is not bounded by any relation; the basis is infinite")]
    UnboundedBasis(String),
    #[error("infinitely many monomials per degree: {0}")]
    InfinitePerDegree(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("truncation orders differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("formal group law coefficient {coefficient} keeps a denominator divisible by {p}")]
    ResidualDenominator { coefficient: String, p: u32 },
    #[error("formal group law axiom fails: {0}")]
    AxiomFailure(String),
    #[error("coefficient comparison inconsistent at x^{exponent}: {detail}")]
    Inconsistent { exponent: usize, detail: String },
    #[error("stage {stage} relation has no unit leading coefficient: {detail}")]
    NonUnitLeading { stage: usize, detail: String },
    #[error("no relation found for stage {0}; truncation too small?")]
    MissingStage(usize),
    #[error("stage {stage}: formal-sum cross terms contribute {detail}")]
    CrossTerm { stage: u32, detail: String },
    #[error("presentations disagree: {0}")]
    Mismatch(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("{what} exceeds budget {limit}")]
    Budget { what: String, limit: usize },
    #[error("missing etale certificate: {0}")]
    MissingEtaleCertificate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
