use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("required file not found: {0}")]
    NotFound(PathBuf),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed {path} at line {line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("no data: {0}")]
    Empty(String),

    #[error("checkpoint mismatch in {0}: it was written by a run with a different configuration")]
    CheckpointMismatch(PathBuf),

    #[error("replay of realization {realization} diverged from the recorded spectrum")]
    ReplayMismatch { realization: u32 },

    #[error(transparent)]
    Core(#[from] entcool_core::Error),

    #[error("JSON error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Io { .. } => "io",
            HarnessError::NotFound(_) => "not_found",
            HarnessError::Config(_) => "invalid_config",
            HarnessError::Malformed { .. } => "malformed_input",
            HarnessError::Empty(_) => "empty_input",
            HarnessError::CheckpointMismatch(_) => "checkpoint_mismatch",
            HarnessError::ReplayMismatch { .. } => "replay_mismatch",
            HarnessError::Core(entcool_core::Error::InvalidConfiguration(_)) => "invalid_config",
            HarnessError::Core(_) => "invalid_argument",
            HarnessError::Json { .. } => "json",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "invalid_config" | "invalid_argument" => 2,
            "not_found" => 3,
            _ => 1,
        }
    }

    /// `{"error": {"kind": ..., "message": ...}}`
    pub fn to_record(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            kind: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Record<'a> {
            error: Inner<'a>,
        }
        serde_json::to_string(&Record {
            error: Inner {
                kind: self.kind(),
                message: self.to_string(),
            },
        })
        .expect("error record serializes")
    }
}
