use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resource limit: {what} requested {requested}, maximum {max}")]
    ResourceLimit { what: &'static str, requested: usize, max: usize },

    #[error("precision unachievable: im(z) = {im} is below the evaluation floor {floor}")]
    PrecisionUnachievable { im: f64, floor: f64 },

    #[error("matrix ({a}, {b}; {c}, {d}) does not have determinant 1")]
    InvalidMatrix { a: i64, b: i64, c: i64, d: i64 },

    #[error("reduction did not terminate after {steps} steps")]
    ReductionDiverged { steps: usize },

    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { pos: usize, name: String },

    #[error(
        "polynomial depends on Y2; the T-substitution bound is unreliable there \
         (Y0*Y2 - (2/3)*Y1^2 has order at least 5 at conjugates of rho although the bound gives 4)"
    )]
    Y2Dependence,

    #[error("value {0} is ramified (j' vanishes over 0 and 1728)")]
    RamifiedValue(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("contour passes through or near a zero: {0}")]
    BoundaryZero(String),

    #[error("precision escalation exhausted at {bits} bits: {msg}")]
    PrecisionExhausted { bits: u32, msg: String },

    #[error("Newton iteration diverged after {steps} steps")]
    NewtonDiverged { steps: usize },

    #[error("derivative degenerate near the root")]
    DerivativeDegenerate,

    #[error("disc selection failed: {0}")]
    DiscSelection(String),

    #[error("degenerate region: {0}")]
    RegionDegenerate(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("insufficient witnesses: have {have}, need {need}")]
    InsufficientWitnesses { have: usize, need: usize },

    #[error("unknown example id `{0}`")]
    UnknownExample(String),

    #[error("corrupt table cache: {0}")]
    CorruptCache(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
