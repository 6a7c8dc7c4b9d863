use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error(transparent)]
    Domain(#[from] nimkerr::Error),
    #[error("io: {0}")]
    Io(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn config(key: &str, message: impl Into<String>) -> Self {
        CliError::Config { key: key.to_string(), message: message.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "ConfigError",
            CliError::Domain(e) => e.kind(),
            CliError::Io(_) => "IoError",
            CliError::Output(_) => "OutputError",
        }
    }

    /// `{"error": kind, "message": ...}` plus `key` for config errors and
    /// `required_dim` when the Fock space was too small.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        match self {
            CliError::Config { key, .. } => v["key"] = json!(key),
            CliError::Domain(nimkerr::Error::TruncationTooSevere { required_dim, .. }) => {
                v["required_dim"] = json!(required_dim)
            }
            _ => {}
        }
        v
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
