use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no fare policy configured for mode `{mode}`")]
    MissingFarePolicy { mode: String },

    #[error("duplicate mode name `{0}` in fare table")]
    DuplicateMode(String),

    #[error("repair mode `{0}` already exists in the fare table")]
    RepairModeNotFresh(String),

    #[error("invalid fare range for mode `{mode}`, field `{field}`: low {low} exceeds high {high}")]
    InvertedRange {
        mode: String,
        field: &'static str,
        low: String,
        high: String,
    },

    #[error("PoI id {0} is out of range")]
    UnknownPoi(u32),

    #[error("unknown PoI `{0}`")]
    UnknownExternalPoi(String),

    #[error("invalid edge {u} -> {v}: {reason}")]
    InvalidEdge { u: String, v: String, reason: String },

    #[error("network has no PoIs")]
    EmptyNetwork,

    #[error("query has no agents")]
    NoAgents,

    #[error("category {index} is empty")]
    EmptyCategory { index: usize },

    #[error("query has no categories")]
    NoCategories,

    #[error("common PoI {poi} is not a member of category {index}")]
    NotInCategory { index: usize, poi: String },

    #[error("expected {expected} common PoIs, got {actual}")]
    CommonPathLength { expected: usize, actual: usize },

    #[error("no path from `{from}` to `{to}`")]
    Infeasible { from: String, to: String },

    #[error("broken parent chain at category {category}")]
    BrokenParentChain { category: usize },

    #[error("enumeration of {size} valid paths exceeds the limit of {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("{file}:{line}: {message}")]
    Parse { file: PathBuf, line: u64, message: String },

    #[error("missing input file {0}")]
    MissingFile(PathBuf),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("network too small: {0}")]
    Sizing(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(file: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
