use qproj_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("index error: {0}")]
    Index(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Index(_) | CliError::Dimension(_) => 3,
            CliError::ChecksFailed(_) => 5,
            CliError::Core(e) => match e {
                Error::NotSkewSymmetric(..) => 2,
                Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch(_)
                | Error::NotSquare { .. }
                | Error::TooLarge { .. }
                | Error::CyclicQuiver => 3,
                Error::NotReachable { .. } => 4,
                Error::ConventionMismatch(_) => 6,
                _ => 5,
            },
        }
    }
}
