//! Error type shared across the pipeline.

use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A structured parse failure in an input file, carrying the 1-based
    /// line (or row) number where it was detected.
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// An ICD-9 code string that does not match any recognized shape.
    #[error("unrecognized ICD-9 code {raw:?}: {message}")]
    Code { raw: String, message: String },

    /// A caller violated an operation's contract (bad dimensions, empty
    /// input where nonempty is required, out-of-range parameter, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input data is inconsistent with itself (orphan references,
    /// mismatched item sets between runs, ...).
    #[error("data error: {0}")]
    Data(String),

    /// Invalid configuration key, value, or combination.
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: row {row}: {message}")]
    Csv {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// A pipeline stage failed; wraps the underlying error with the stage
    /// name so CLI output pinpoints where a run aborted.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, row: usize, message: impl Into<String>) -> Self {
        Error::Csv {
            path: path.into(),
            row,
            message: message.into(),
        }
    }

    pub(crate) fn stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// True for errors caused by malformed or inconsistent input data, as
    /// opposed to caller bugs or I/O failures.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Code { .. } | Error::Data(_) | Error::Csv { .. }
        )
    }

    /// Process exit code class: 1 usage, 2 data error, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Parse { .. }
            | Error::Code { .. }
            | Error::Contract(_)
            | Error::Data(_)
            | Error::Csv { .. } => 2,
            Error::Io { .. } | Error::Json(_) => 3,
            Error::Stage { source, .. } => source.exit_code(),
        }
    }
}
