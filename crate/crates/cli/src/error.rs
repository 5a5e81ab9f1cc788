use thiserror::Error;

/// Everything that makes an invocation an input error (exit status 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(#[from] cecot_core::Error),
    #[error("bad argument: {0}")]
    Argument(String),
}
