use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing artifact {artifact}; run the `{stage}` stage first")]
    MissingDependency { stage: &'static str, artifact: String },

    #[error("unknown document id \"{0}\"")]
    UnknownDocument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] lexmap::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 when an upstream stage has to run first, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MissingDependency { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
