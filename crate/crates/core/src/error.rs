use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("0/0 indeterminacy at the evaluation point")]
    IndeterminateValue,

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("base map must have degree 1, found {0}")]
    DegreeTooHigh(usize),

    #[error("orbit enters the indeterminacy locus at step {step}")]
    HitIndeterminacy { step: usize },

    #[error("symbolic degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("coefficient h_{index} has a pole at the step-{step} orbit point")]
    CoefficientPole { step: usize, index: usize },

    #[error("base-point height exceeds the evaluation cap at step {step}")]
    HeightLimitExceeded { step: usize },

    #[error("base orbit repeats within the window (length {period} cycle from step {preperiod})")]
    OrbitFinite { preperiod: usize, period: usize },

    #[error("orbit re-enters the singular locus beyond every candidate start index <= {0}")]
    SingularTail(usize),

    #[error("mahler valuation profile violates v_p(delta^k) >= k at k = {k}")]
    AnalyticityFailed { k: usize },

    #[error("prime {p} divides a denominator of the input data")]
    PrimeDividesInput { p: u64 },

    #[error("residue computation exceeded the step cap {0}")]
    ResidueStepCap(usize),

    #[error("not an idempotent system: {0}")]
    NotIdempotentSystem(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("malformed rational literal: {0:?}")]
    MalformedRational(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
