//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: line {line}: expected {expected} columns, found {found}", path.display())]
    RaggedRow { path: PathBuf, line: usize, expected: usize, found: usize },

    #[error("{}: line {line}, column {col}: cannot parse {value:?} as a finite number", path.display())]
    BadCell { path: PathBuf, line: usize, col: usize, value: String },

    #[error("label column {col} out of range for a {width}-column file")]
    LabelColumnOutOfRange { col: usize, width: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation needs at least {needed} ball members, got {got}")]
    TooFewMembers { needed: usize, got: usize },

    #[error("ball graph needs at least 2 balls, got {0}")]
    TooFewBalls(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("cannot form {requested} clusters: {available} available ({context})")]
    KUnreachable { requested: usize, available: usize, context: &'static str },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
