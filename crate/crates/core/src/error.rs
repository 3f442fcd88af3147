use thiserror::Error;

/// Everything the library can refuse to do.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::gf2::MAX_DIM)]
    DimensionOutOfRange(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u32, got: u32 },
    #[error("bits {bits:#x} do not fit in dimension {dim}")]
    BitsOutOfRange { bits: u32, dim: u32 },
    #[error("request {0} is the all-zero vector")]
    ZeroRequest(usize),
    #[error("the shift vector must be nonzero")]
    ZeroShift,
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("columns do not form a permutation of F_2^{0}")]
    NotHadamard(u32),
    #[error("invalid good-path: {0}")]
    InvalidPath(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no eligible pair in the cycle of pair {0}")]
    NoEligiblePair(usize),
    #[error("candidate search exhausted at iteration {t}: {state}")]
    SearchExhausted { t: usize, state: String },
    #[error("too many requests: {k} > {max}")]
    TooManyRequests { k: usize, max: usize },
    #[error("wrong batch size: {k} (expected at most {expected})")]
    WrongBatchSize { k: usize, expected: usize },
    #[error("alpha {0} is outside [2/3, 1]")]
    AlphaOutOfRange(String),
    #[error("request batch cannot be row-reduced to an all-ones row 0")]
    NotReducible,
    #[error("bad set of size {bad} exceeds the repair budget {budget}")]
    BudgetExceeded { bad: usize, budget: usize },
    #[error("no strategy admits k={k} at s={s}")]
    NoStrategy { s: u32, k: usize },
    #[error("resource limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
