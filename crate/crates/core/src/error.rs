use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("id mismatch: {0}")]
    IdMismatch(String),

    #[error("duplicate id `{id}` in {what}")]
    DuplicateId { id: String, what: &'static str },

    #[error("non-binary interaction value {value} at ({row}, {col})")]
    NonBinaryInteraction { row: usize, col: usize, value: f64 },

    #[error("similarity value {value} at ({row}, {col}) outside [0, 1]")]
    SimilarityRange { row: usize, col: usize, value: f64 },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("nothing selectable: {candidates} candidates, {excluded} excluded")]
    NothingSelectable { candidates: usize, excluded: usize },

    #[error("transductive setting unsupported: both drug and target are training entities")]
    TransductiveQuery,

    #[error("no interactions in the interaction matrix")]
    NoInteractions,

    #[error("AUPR undefined: no positive labels")]
    AuprUndefined,

    #[error("cannot draw {requested} items: only {support} have non-zero probability")]
    InsufficientSupport { requested: usize, support: usize },

    #[error("{0}")]
    Output(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
