use thiserror::Error;

#[derive(Debug, Error)]
pub enum IsacError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("value {value} for `{name}` lies outside [0, 1]")]
    DomainError { name: String, value: f64 },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("auxiliary alphabet size {size} exceeds the cardinality bound {bound}")]
    CardinalityExceeded { size: usize, bound: usize },

    #[error("linear program solver failure: {0}")]
    SolverFailure(String),

    #[error("sweep configuration yields no input laws")]
    EmptySweep,

    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl IsacError {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        IsacError::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(name: &str, value: f64) -> Self {
        IsacError::DomainError {
            name: name.to_string(),
            value,
        }
    }

    /// Process exit status used by the CLI: 2 for I/O failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            IsacError::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, IsacError>;
