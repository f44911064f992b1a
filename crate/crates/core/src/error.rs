use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in Q(A)")]
    DivisionByZero,

    #[error("operands belong to different twist systems")]
    MixedSystems,

    #[error("generator index {index} is out of range 1..={n}")]
    InvalidIndex { index: usize, n: usize },

    #[error("invalid twist system: {0}")]
    InvalidSystem(String),

    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeTooHigh { degree: usize, bound: usize },

    #[error("word budget exceeded: {attempted} words requested, budget is {budget}")]
    BudgetExceeded { attempted: u64, budget: u64 },

    #[error("psi is only defined on the two-generator torus system with i(1,2) = 1")]
    WrongSystem,

    #[error("({p},{q}) is not a primitive vector")]
    NotPrimitive { p: i64, q: i64 },

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            message: message.into(),
        }
    }
}
