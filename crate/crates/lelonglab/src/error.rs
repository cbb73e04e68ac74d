use lelonglab_core::Error as CoreError;

/// Failures, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable, malformed or invalid input (exit 2).
    #[error("{0}")]
    Input(String),
    /// Quadrature could not meet its tolerance (exit 3).
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Some verdict failed (exit 1).
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
    /// Writing an output failed (exit 2).
    #[error("{path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Input(_) | CliError::Output { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// The message without the variant prefix.
    pub fn message(&self) -> String {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m.clone(),
            other => other.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::QuadratureFailure { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
