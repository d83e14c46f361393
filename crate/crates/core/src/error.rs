use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (bad radix, value, position, length).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is defined, but not for this input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// gap and gap index need at least two essential variables.
    #[error("undefined: function has {ess} essential variable(s), at least 2 are required")]
    UndefinedGap { ess: usize },

    #[error("function is not symmetric")]
    NotSymmetric,

    /// A constructor spec breaks one of its invariants.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// The input satisfies the checked preconditions but admits no decomposition.
    #[error("no decomposition exists: {0}")]
    NoSolution(String),

    #[error("exhaustive run needs {required} candidates, budget is {budget}; request sampling or override the budget")]
    OverBudget { required: u128, budget: u128 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
