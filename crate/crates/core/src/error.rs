use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Parse,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, offset {offset}: {message}")]
    Parse {
        line: usize,
        offset: usize,
        message: String,
    },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid chord diagram: {0}")]
    InvalidDiagram(String),

    #[error("{kind} not applicable: {reason}")]
    MoveNotApplicable { kind: &'static str, reason: String },

    #[error("not a graph-knot: corank(A+E) = {corank}")]
    NotGraphKnot { corank: usize },

    #[error("span is undefined for the zero polynomial")]
    UndefinedSpan,

    #[error("coefficient overflow in polynomial arithmetic")]
    ArithmeticOverflow,

    #[error("{what}: size {size} exceeds limit {limit}")]
    ResourceLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } => ErrorClass::Parse,
            Error::ResourceLimit { .. } | Error::DimensionTooLarge { .. } => ErrorClass::Resource,
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn parse(line: usize, offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            offset,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
