use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pole: argument {re}+{im}i is at a nonpositive integer")]
    Pole { re: f64, im: f64 },
    #[error("skipped near pole: {0}")]
    SkippedNearPole(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("unbound variable: {0}")]
    UnboundVariable(String),
    #[error("exponent pair difference {re}+{im}i is not an integer")]
    NonIntegerDifference { re: f64, im: f64 },
    #[error("expression leaves the representable class: {0}")]
    OutOfClass(String),
    #[error("integrand is not integrable: {0}")]
    NonIntegrable(String),
    #[error("evaluation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("term count {0} exceeds the configured cap")]
    TermCap(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("script step {index} failed: {reason}")]
    StepFailed { index: usize, reason: String },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("parity rule violated: {0}")]
    Parity(String),
}

pub type Result<T> = core::result::Result<T, Error>;
