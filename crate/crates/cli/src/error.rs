use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("malformed factor file: {0}")]
    FactorFile(String),

    #[error(transparent)]
    Core(#[from] tenuniq::Error),

    #[error("cannot render report: {0}")]
    Render(String),
}

impl CliError {
    /// 1 for usage and input errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}
