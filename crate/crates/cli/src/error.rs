use thiserror::Error;

/// Failures of a CLI command, each tied to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(warpgeom::Error),

    #[error("{0}")]
    Geometry(warpgeom::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Geometry(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Hypothesis(_) => 3,
        }
    }

    /// Errors raised while turning config values into objects.
    pub fn config(e: warpgeom::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<warpgeom::Error> for CliError {
    fn from(e: warpgeom::Error) -> Self {
        if e.is_hypothesis_violation() {
            CliError::Hypothesis(e)
        } else {
            CliError::Geometry(e)
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
