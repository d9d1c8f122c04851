use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version` output; not a failure.
    #[error("{0}")]
    Info(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("norm: {0}")]
    Norm(String),

    #[error("parse: {0}")]
    Parse(String),

    #[error("chi file must contain 4 vectors, found {0}")]
    MissingVector(usize),

    #[error("{0}")]
    Core(#[from] qteleport_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Io(_) => 3,
            _ => 2,
        }
    }
}
