use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("index magnitude {index} exceeds the configured cap {cap}")]
    IndexCapExceeded { index: BigInt, cap: BigInt },

    #[error("optimal euclidean division by zero")]
    DivisionByZero,

    #[error("denominator must be positive, got {0}")]
    NonpositiveDenominator(BigInt),

    #[error("no witness of nonzeroness found below index {cap}; operand may be zero")]
    ZeroDivisor { cap: BigInt },

    #[error("proven certificate violated: bound {bound} but observed defect {observed} at (n, m) = ({n}, {m})")]
    CertificateViolation {
        bound: BigInt,
        observed: BigInt,
        n: BigInt,
        m: BigInt,
    },

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("polynomial is not strictly increasing on the bracket: {0}")]
    NonMonotone(String),

    #[error("negative input to integer square root")]
    NegativeSqrt,

    #[error("operand is not certified positive")]
    NotPositive,

    #[error("evaluation budget exhausted: {0}")]
    ResourceExhausted(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0}")]
    Invalid(String),
}
