use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable index out of range: x{index} with ambient dimension {ambient}")]
    VariableOutOfRange { index: usize, ambient: usize },

    #[error("{0} is not a prime characteristic")]
    NonPrime(u64),

    #[error("division by zero in coefficient field")]
    DivisionByZero,

    #[error("mismatched operands: {0}")]
    Mismatch(String),

    #[error("order not determined below level {level}")]
    OrderUndetermined { level: u32 },

    #[error("inconsistent vector length: expected {expected}, found {found}")]
    VectorLength { expected: usize, found: usize },

    #[error("generator level {have} is lower than requested level {want}")]
    LevelTooLow { have: u32, want: u32 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("not stabilized by level {level}")]
    NotStabilized { level: u32 },

    #[error("dimension >= 2 suspected: graded values still increasing at level {level}")]
    DimensionAtLeastTwo { level: u32 },

    #[error("field too small: need {needed} distinct points, field has {available}")]
    FieldTooSmall { needed: u64, available: u64 },

    #[error("no singularity with embedding dimension {b} and multiplicity {e0}")]
    EmbeddingDimension { b: u64, e0: u64 },

    #[error("inadmissible Hilbert polynomial e0={e0}, e1={e1}")]
    Inadmissible { e0: u64, e1: i64 },

    #[error("malformed cell index: {0}")]
    MalformedCell(String),

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("generators of a semigroup must be coprime (gcd = {0})")]
    NotCoprime(u64),

    #[error("insufficient t-precision: need at least {required}, have {have}")]
    InsufficientPrecision { required: u32, have: u32 },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for outcomes a caller may retry with more resources (higher level, bigger budget).
    pub fn is_soft(&self) -> bool {
        matches!(
            self,
            Error::NotStabilized { .. } | Error::DimensionAtLeastTwo { .. } | Error::BudgetExceeded { .. }
        )
    }
}
