use thiserror::Error;

/// Failure modes shared by every module.
///
/// The CLI maps these onto process exit codes: domain 2, resource 3,
/// precision 4, internal 70.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation would exceed a configured budget.
    #[error("resource error: {what} exceeds budget {budget}")]
    Resource { what: String, budget: String },
    /// Certified arithmetic could not decide a comparison at the maximum precision.
    #[error("precision error: {0}")]
    Precision(String),
    /// Malformed input file or stream.
    #[error("format error: {0}")]
    Format(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(what: impl Into<String>, budget: impl ToString) -> Self {
        Error::Resource {
            what: what.into(),
            budget: budget.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Resource { .. } | Error::Format(_) => 3,
            Error::Precision(_) => 4,
            Error::Internal(_) => 70,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
