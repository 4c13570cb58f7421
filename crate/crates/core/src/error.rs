use thiserror::Error;

/// Errors shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A finite spec ran out of partial quotients.
    #[error("insufficient quotients: a_{index} is not defined by the spec")]
    InsufficientQuotients { index: usize },

    /// An undecided comparison stayed undecided after the refinement cap.
    #[error("refinement cap reached while deciding {what}")]
    RefinementCap { what: String },

    /// A count exceeded the configured budget.
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded { what: String, needed: String, budget: String },

    /// A trigonometric polynomial degree exceeded the materialization cap.
    #[error("degree cap exceeded: degree {degree} > cap {cap}")]
    DegreeCap { degree: String, cap: u64 },

    /// An operation's hypothesis is violated or could not be certified.
    #[error("precondition: {0}")]
    Precondition(String),

    /// The three-distance structure broke; this is an implementation bug.
    #[error("three-gap violation at level {level}: {detail}")]
    ThreeGapViolation { level: usize, detail: String },

    /// Evaluation of a registered function failed at orbit index `k`.
    #[error("evaluation failed at k = {k}: {detail}")]
    Evaluation { k: u64, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn budget(what: &str, needed: impl ToString, budget: impl ToString) -> Self {
        Error::BudgetExceeded {
            what: what.to_string(),
            needed: needed.to_string(),
            budget: budget.to_string(),
        }
    }
}
