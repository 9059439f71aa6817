use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Numeric(#[from] fbms_core::Error),
    /// Bad user input, with the flag or config key it came from.
    #[error("invalid value for {flag}: {reason}")]
    Config { flag: String, reason: String },
    #[error("nothing to write: the sample set is empty")]
    EmptyInput,
    #[error("a revolution mesh needs at least 8 segments, got {0}")]
    TooFewSegments(usize),
    #[error("profile radius must stay positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("meshes are only written for surfaces in R^3, ambient dimension here is {0}")]
    DimensionUnsupported(u32),
    #[error("malformed file {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    pub(crate) fn config(flag: &str, reason: impl Into<String>) -> Error {
        Error::Config { flag: flag.to_string(), reason: reason.into() }
    }

    /// Process exit code: 2 for rejected input, 3 for numerical failures,
    /// 1 for I/O and serialization trouble.
    pub fn exit_code(&self) -> i32 {
        use fbms_core::Error as E;
        match self {
            Error::Config { .. } | Error::TooFewSegments(_) | Error::DimensionUnsupported(_) => 2,
            Error::Numeric(E::InvalidInput(_) | E::DomainError { .. }) => 2,
            Error::Numeric(_) | Error::EmptyInput | Error::NonPositiveRadius(_) => 3,
            Error::Io { .. } | Error::Json(_) | Error::Malformed { .. } => 1,
        }
    }
}
