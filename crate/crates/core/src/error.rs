use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CitexError>;

#[derive(Debug, Error)]
pub enum CitexError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid count {value:?} for ({cited}, {citing}); counts must be finite and >= 0")]
    InvalidCount {
        cited: String,
        citing: String,
        value: String,
    },

    #[error("duplicate journal key {0:?}")]
    DuplicateJournal(String),

    #[error("unknown journal key {0:?}")]
    UnknownJournal(String),

    #[error("unknown input format {0:?}")]
    UnknownFormat(String),

    #[error("comparison graph is disconnected; components: {components:?}")]
    Disconnected { components: Vec<Vec<String>> },

    #[error("scores diverge (separation); offending journals: {journals:?}")]
    Separation { journals: Vec<String> },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("journal {journal:?} has constant exchange totals; correlation undefined")]
    ConstantRow { journal: String },

    #[error("{0} is undefined")]
    Undefined(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl CitexError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CitexError::Io {
            path: path.into(),
            source,
        }
    }
}
