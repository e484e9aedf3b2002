use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("tolerance violated: {0}")]
    Tolerance(String),

    #[error(transparent)]
    Budget(evap_core::Error),

    #[error(transparent)]
    Model(evap_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error("serialization: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 is success; 1 is reserved for uncategorized failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Checkpoint { .. } => 2,
            Self::Tolerance(_) => 3,
            Self::Budget(_) => 4,
            Self::Model(_) => 5,
            Self::Io { .. } | Self::Serialize(_) => 6,
        }
    }
}

impl From<evap_core::Error> for CliError {
    fn from(e: evap_core::Error) -> Self {
        use evap_core::Error as E;
        match e {
            E::PathBudget { .. } | E::DenseLimit { .. } => Self::Budget(e),
            E::NormalizationDrift { .. } | E::NotOrthogonal { .. } => {
                Self::Tolerance(e.to_string())
            }
            E::InvalidParameter { .. }
            | E::DimensionCap { .. }
            | E::InvalidLogBase(_)
            | E::OutOfDomain { .. } => Self::Config(e.to_string()),
            _ => Self::Model(e),
        }
    }
}
