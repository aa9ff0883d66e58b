use thiserror::Error;

/// Errors raised by the algebra kernel and the filtration machinery.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("division is only allowed between integer literals (column {0})")]
    DivisionNotAllowed(usize),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("{0} is not an odd prime below 2^31")]
    BadModulus(u64),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("colon by the zero ideal")]
    ColonByZero,

    #[error("ideal is not primary to the maximal ideal: no pure power of `{0}` among leading terms")]
    NotMPrimary(String),

    #[error("Ratliff-Rush chain for degree {degree} did not stabilize by k = {cap}; last lengths {partial:?}")]
    UnstableClosure {
        degree: usize,
        cap: usize,
        partial: Vec<usize>,
    },

    #[error("no superficial element found in {trials} trials; best candidate {best} failed at n = {failing:?}")]
    NoSuperficial {
        trials: usize,
        best: String,
        failing: Vec<usize>,
    },

    #[error("element {0} is not superficial: {1}")]
    NotSuperficial(String, String),

    #[error("h-polynomial undetermined up to n = {0}; raise max-n")]
    HilbertUndetermined(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no minimal reduction certified in {trials} trials (reduction number cap {cap})")]
    NoReduction { trials: usize, cap: usize },

    #[error("depth criteria disagree: {0}")]
    CriteriaDisagree(String),

    #[error("identity check failed: {0}")]
    IdentityFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
