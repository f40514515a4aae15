use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("malformed document {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("unsupported schema_version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    /// A record failed validation. `record` is the sentence id (or seed
    /// position) and `field` the offending field path.
    #[error("invalid record `{record}`, field `{field}`: {message}")]
    Invalid {
        record: String,
        field: String,
        message: String,
    },

    #[error("resource {resource}, line {line}: {message}")]
    Resource {
        resource: String,
        line: usize,
        message: String,
    },

    #[error("unknown synset `{0}`")]
    UnknownSynset(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("review incomplete, undecided questions: {}", .0.join(", "))]
    Undecided(Vec<String>),

    #[error("session finished")]
    Finished,
}

impl Error {
    pub(crate) fn invalid(
        record: impl Into<String>,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Invalid {
            record: record.into(),
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
