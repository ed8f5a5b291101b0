use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag values.
    #[error("{0}")]
    Usage(String),
    /// Malformed or unusable input data.
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Compute(#[from] mdepth::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Data(_) => "DataError",
            CliError::Compute(e) => e.kind(),
            CliError::Io { .. } => "IoError",
        }
    }

    /// One-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        let report = ErrorReport { error: self.kind(), message: self.to_string(), exit_code: self.exit_code() };
        serde_json::to_string(&report).expect("error report serializes")
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
