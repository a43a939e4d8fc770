use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The run configuration could not be read or is inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// Amplitude data violates an invariant or cannot be loaded.
    #[error("{0}")]
    Data(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl From<nearfield_core::Error> for CliError {
    fn from(e: nearfield_core::Error) -> Self {
        use nearfield_core::Error::*;
        match e {
            Domain(_) | InvalidArgument(_) | UnsupportedOrder(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
