use std::path::PathBuf;

use thiserror::Error;

/// Problems with scenario input; all map to exit code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl InputError {
    pub fn invalid(location: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Invalid {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn json(path: &std::path::Path, e: serde_json::Error) -> Self {
        InputError::Json {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
