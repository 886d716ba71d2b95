use thiserror::Error;

use crate::net::Marking;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),

    #[error("unknown place `{0}`")]
    UnknownPlace(String),

    #[error("transition index {0} out of range")]
    TransitionIndex(usize),

    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("transition `{transition}` is not enabled at {marking}")]
    NotEnabled { marking: Marking, transition: String },

    #[error("word not firable: position {position} (`{transition}`) is disabled at {marking}")]
    WordNotFirable {
        position: usize,
        transition: String,
        marking: Marking,
    },

    #[error("the two transitions must differ, got `{0}` twice")]
    SameTransition(String),

    #[error("unsupported on inhibitor nets: {0}")]
    Unsupported(&'static str),

    #[error("reachability oracle could not decide exactly: {0}")]
    Inexact(String),

    #[error("residue oracle broke its monotonicity contract: {0}")]
    OracleContract(String),

    #[error("iteration cap of {cap} exceeded while {what}")]
    IterationCap { what: &'static str, cap: usize },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid vector `{0}`")]
    InvalidVector(String),
}
