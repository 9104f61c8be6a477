use thiserror::Error;

/// Failure modes shared by every decision procedure.
///
/// The variants map one-to-one onto the CLI exit codes: domain and parse
/// errors exit with 1, resource caps with 2, soundness failures with 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input violates a precondition of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configurable search cap was hit before the computation finished.
    #[error("resource cap `{cap}` exceeded (limit {limit}): {detail}")]
    Resource {
        cap: &'static str,
        limit: u64,
        detail: String,
    },

    /// Two routes that must agree by theorem disagreed. Always a bug.
    #[error("soundness failure: {0}")]
    Soundness(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn soundness(msg: impl Into<String>) -> Self {
        Error::Soundness(msg.into())
    }

    pub fn resource(cap: &'static str, limit: u64, detail: impl Into<String>) -> Self {
        Error::Resource {
            cap,
            limit,
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse { .. } => 1,
            Error::Resource { .. } => 2,
            Error::Soundness(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
