use thiserror::Error;

use crate::multigraph::NodeSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node set {set} is not a non-empty proper subset of {n} nodes")]
    NotProper { set: NodeSet, n: usize },

    #[error("graph has {n} nodes, above the exhaustive limit of {limit} (set FLEXCUT_EXHAUSTIVE_LIMIT to override)")]
    ExhaustiveLimit { n: usize, limit: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("infeasible: no available edge crosses {witness}")]
    Infeasible { witness: NodeSet },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("precondition violated: {what}{}", witness_suffix(.witness))]
    Precondition {
        what: String,
        witness: Option<(NodeSet, Option<NodeSet>)>,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal invariant failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn witness_suffix(w: &Option<(NodeSet, Option<NodeSet>)>) -> String {
    match w {
        None => String::new(),
        Some((a, None)) => format!(" (witness {a})"),
        Some((a, Some(b))) => format!(" (witness {a}, {b})"),
    }
}

impl Error {
    pub(crate) fn precondition(what: impl Into<String>) -> Self {
        Error::Precondition {
            what: what.into(),
            witness: None,
        }
    }

    pub(crate) fn precondition_at(what: impl Into<String>, set: NodeSet) -> Self {
        Error::Precondition {
            what: what.into(),
            witness: Some((set, None)),
        }
    }

    pub(crate) fn precondition_pair(what: impl Into<String>, a: NodeSet, b: NodeSet) -> Self {
        Error::Precondition {
            what: what.into(),
            witness: Some((a, Some(b))),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
