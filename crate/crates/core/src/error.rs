use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the library.
///
/// The CLI maps each variant onto an exit code via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^31")]
    InvalidModulus(u64),
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degree bound violation: {0}")]
    BoundViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operator family has no extendibility witness")]
    MissingWitness,
    #[error("witness does not extend the family: {0}")]
    NotExtendible(String),
    #[error("condition {condition} failed: {detail}")]
    ConditionFailed { condition: u8, detail: String },
    #[error("degenerate radius: {0}")]
    DegenerateRadius(String),
    #[error("enumeration budget exceeded ({needed} > {cap}): {hint}")]
    BudgetExceeded {
        needed: u128,
        cap: u128,
        hint: String,
    },
    #[error("kernel dimension {dim} exceeds cap {cap}")]
    KernelTooLarge { dim: usize, cap: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// 2 for bad input, 3 for plan/condition failures, 4 for broken invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConditionFailed { .. }
            | Error::DegenerateRadius(_)
            | Error::KernelTooLarge { .. }
            | Error::MissingWitness
            | Error::NotExtendible(_) => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn bounds(msg: impl Into<String>) -> Self {
        Error::BoundViolation(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
