use thiserror::Error;

use crate::graph::EdgeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown edge `{0}`")]
    UnknownEdge(EdgeId),

    #[error("unknown element index {0}")]
    UnknownElement(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("edge subset is not contained in the edge set")]
    NotSubset,

    #[error("edge `{0}` is already in the spanning tree")]
    EdgeInTree(EdgeId),

    #[error("edge set is not a spanning tree")]
    NotSpanningTree,

    #[error("element {0} is a loop")]
    Loop(usize),

    #[error("instance contains a non-exponential weight distribution")]
    NonExponential,

    #[error("instance contains an exponential weight distribution")]
    NotDiscrete,

    #[error("expected {expected} samples, got {actual}")]
    MissingSample { expected: usize, actual: usize },

    #[error("empty rate vector")]
    EmptyRates,

    #[error("{what} exceeds the size guard ({actual} > {limit})")]
    SizeGuard {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub(crate) fn guard(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::SizeGuard {
            what,
            limit,
            actual,
        }
    }
}
