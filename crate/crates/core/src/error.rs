use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("sentence starting at line {line}: {message}")]
    Structure { line: usize, message: String },

    #[error("bracket parse error at offset {offset}: {message}")]
    Ptb { offset: usize, message: String },

    #[error("constituency tree does not align with tokens: {0}")]
    Alignment(String),

    #[error("{path}:{line}: {message}")]
    Lexicon { path: String, line: usize, message: String },

    #[error("invalid settings string {0:?}")]
    Settings(String),

    #[error("question not decomposable: {0}")]
    NotDecomposable(String),

    #[error("constituency trace failed: {0}")]
    Trace(String),

    #[error("tree contract violation: {0}")]
    Contract(String),

    #[error("planning failed between vertices {parent} and {child}: {message}")]
    Planning { parent: usize, child: usize, message: String },

    #[error("execution error: {0}")]
    Execution(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for errors caused by malformed or unreadable input files.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Conllu { .. }
                | Error::Structure { .. }
                | Error::Ptb { .. }
                | Error::Alignment(_)
                | Error::Lexicon { .. }
                | Error::Settings(_)
                | Error::Io { .. }
                | Error::Json(_)
        )
    }
}
