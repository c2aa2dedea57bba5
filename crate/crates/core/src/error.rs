use thiserror::Error;

/// Errors raised while loading or querying proofs and automata.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ordinal: {0}")]
    Ordinal(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{location}: {message}")]
    Structure { location: String, message: String },

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("unknown {side} value {value:?} at node {node:?}")]
    UnknownValue {
        node: String,
        side: &'static str,
        value: String,
    },

    #[error("trace is longer than the path ({trace} > {path})")]
    TraceTooLong { trace: usize, path: usize },

    #[error("approximation depth must be positive")]
    ZeroApproximation,

    #[error("automaton kind mismatch: expected {expected}, found {found}")]
    WrongAutomaton {
        expected: &'static str,
        found: &'static str,
    },

    #[error("infinite weight {0} on a transition; run the finitely-progressing check first")]
    InfiniteWeight(String),

    #[error("automata are over different alphabets")]
    AlphabetMismatch,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
