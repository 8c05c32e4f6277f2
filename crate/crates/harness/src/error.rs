use std::path::PathBuf;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Compute(#[from] purifier_core::Error),
    #[error("sweep failed at alpha={alpha}, k={k}, seed={seed}: {source}")]
    Sweep {
        alpha: f64,
        k: usize,
        seed: u64,
        #[source]
        source: Box<HarnessError>,
    },
}

/// Machine-readable error class reported by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Io,
    Compute,
    Sweep,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Config => "config",
            ErrorCategory::Io => "io",
            ErrorCategory::Compute => "compute",
            ErrorCategory::Sweep => "sweep",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Config => 2,
            ErrorCategory::Io => 3,
            ErrorCategory::Compute => 4,
            ErrorCategory::Sweep => 5,
        }
    }
}

impl HarnessError {
    pub fn config(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        HarnessError::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            HarnessError::Config { .. } | HarnessError::InvalidArgument(_) => ErrorCategory::Config,
            HarnessError::Io { .. } => ErrorCategory::Io,
            HarnessError::Compute(purifier_core::Error::Config(_)) => ErrorCategory::Config,
            HarnessError::Compute(_) => ErrorCategory::Compute,
            HarnessError::Sweep { .. } => ErrorCategory::Sweep,
        }
    }
}
