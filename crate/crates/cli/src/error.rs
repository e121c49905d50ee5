use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_ACCEPTANCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Model(#[from] kinex_core::Error),

    #[error("unknown preset `{0}`; valid presets: gibbs, gamma, pareto-tail, gas-oracle")]
    UnknownPreset(String),

    #[error("preset {preset} failed: {failed}")]
    Acceptance { preset: String, failed: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Model(_) | CliError::UnknownPreset(_) => EXIT_CONFIG,
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_IO,
            CliError::Acceptance { .. } => EXIT_ACCEPTANCE,
        }
    }
}

/// Config problems; every variant names the offending key where there is one.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Malformed(String),

    #[error("config must be a JSON object")]
    NotAnObject,

    #[error("missing required key `{0}`")]
    MissingKey(&'static str),

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("key `{key}` must be {expected}")]
    TypeMismatch { key: String, expected: &'static str },

    #[error("{key} must lie in {range}")]
    OutOfRange { key: String, range: &'static str },

    #[error("unknown model `{0}`; expected gibbs, cc, ccm or gas")]
    UnknownModel(String),

    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("override `{0}` must look like key=value")]
    BadOverride(String),
}
