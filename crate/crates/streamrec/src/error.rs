//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, stream construction and the evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// I/O failure, tagged with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input data, tagged with the 1-based line number.
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    /// Invalid configuration (bad delta, bad fold count, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Query or operation outside its domain (t outside span, non-edge, ...).
    #[error("{0}")]
    Domain(String),

    /// A pipeline stage failed; carries the stage name and fold id.
    #[error("stage {stage} (fold {fold}): {msg}")]
    Stage {
        stage: &'static str,
        fold: usize,
        msg: String,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
