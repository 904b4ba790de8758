use thiserror::Error;

/// Errors raised by the library and surfaced by the CLI.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parameter {value} outside the domain {domain} of {what}")]
    Domain {
        what: String,
        value: f64,
        domain: String,
    },

    #[error("tied values in {column} (continuous data expected)")]
    Tie { column: String },

    #[error("{what} needs at least {min} observations, got {got}")]
    SampleSize {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("{what} did not converge (estimate {estimate}, error {error})")]
    Convergence {
        what: String,
        estimate: f64,
        error: f64,
    },

    #[error("degenerate {what}: {value} below threshold {threshold}")]
    Degeneracy {
        what: String,
        value: f64,
        threshold: f64,
    },

    #[error("required sample size exceeds the search cap {cap}")]
    SearchCap { cap: usize },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown model '{0}'")]
    UnknownModel(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>, value: f64, domain: impl Into<String>) -> Self {
        Error::Domain {
            what: what.into(),
            value,
            domain: domain.into(),
        }
    }

    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownModel(_) | Error::Domain { .. } => 2,
            Error::Io(_) => 4,
            Error::Parse { .. } | Error::Tie { .. } | Error::SampleSize { .. } => 2,
            Error::Convergence { .. }
            | Error::Degeneracy { .. }
            | Error::Inconclusive(_)
            | Error::SearchCap { .. }
            | Error::Numeric(_) => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
