use serde_json::json;

/// Everything that ends a command with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] darboux_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        use darboux_core::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Core(e) => match e {
                E::ExponentCapExceeded { .. } => "exponent_cap_exceeded",
                E::Parse { .. } => "parse",
                E::InvalidGrid(_) | E::AllPointsExcluded | E::StencilOrder(_) => "grid",
                E::InvalidSeed | E::NonHarmonic => "seed",
                _ => "invalid_params",
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.kind(), "message": self.to_string() })
    }
}
