use thiserror::Error;

use crate::classifier::MembershipVerdict;
use crate::quiver::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("invalid quiver: {0}")]
    Invalid(ValidationReport),

    #[error("vertex {vertex} is out of range for a quiver on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("colour {colour} is out of range [0, {m}]")]
    ColourOutOfRange { colour: u32, m: u32 },

    #[error("operation requires a simple quiver")]
    NotSimple,

    #[error("quiver is not in the class: {0}")]
    NotMember(Box<MembershipVerdict>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("mutation class has more than {limit} isomorphism classes (possibly infinite or too large)")]
    LimitExceeded { limit: usize, explored: usize },

    #[error("search space of {size} candidates exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("arrow multiplicity overflowed during mutation")]
    MultiplicityOverflow,

    #[error("quiver is already linear")]
    AlreadyLinear,

    #[error("malformed quiver data: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, QuiverError>;
