use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,

    #[error("series reciprocal requires a nonzero constant term")]
    ZeroConstantTerm,

    #[error("unknown {what} {name:?}")]
    UnknownKind { what: &'static str, name: String },

    #[error("sequence must be nonempty")]
    EmptySequence,

    #[error("substitution routes disagree at coefficient {index}")]
    RouteMismatch { index: usize },

    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),

    #[error("syntax error at line {line}, column {column}: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<String>,
    },

    #[error("unbound variable {0:?}")]
    UnboundVariable(String),

    #[error("unknown function {0:?}")]
    UnknownFunction(String),

    #[error("function {name} takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("summation over {0} terms exceeds the limit of {1}")]
    SumTooLarge(String, u64),
}

pub type Result<T> = std::result::Result<T, Error>;
