use thiserror::Error;

/// Errors raised across the library.
///
/// Variants map one-to-one onto the failure classes of the public
/// operations; the CLI turns them into exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("quadrature error: {0}")]
    Quadrature(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("hypothesis check failed: {0}")]
    Hypothesis(String),
    #[error("simulation became unstable: {0}")]
    Stability(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("serialization error: {0}")]
    Serialization(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Config(_) | Error::Io(_) | Error::Serialization(_) => 2,
            Error::Stability(_) => 4,
            _ => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
