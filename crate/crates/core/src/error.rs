use std::path::PathBuf;

use crate::problem::DimensionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(#[from] DimensionReport),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shifts not ordered properly: {0}")]
    ShiftOrdering(String),

    #[error("shift rejected: {0}")]
    ShiftRejected(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("matrix is not diagonalizable to working precision (eigenvector condition {0:.3e})")]
    Defective(f64),

    #[error("no stabilizing solution: {0}")]
    NoStabilizingSolution(String),

    #[error("spectra collide: {0}")]
    SpectraCollision(String),

    #[error("dense size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("unsupported Matrix Market format in {}: {msg}", path.display())]
    UnsupportedFormat { path: PathBuf, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Dimension(_)
            | Error::InvalidProblem(_)
            | Error::InvalidInput(_)
            | Error::ShiftOrdering(_)
            | Error::CapExceeded(_)
            | Error::Parse { .. }
            | Error::UnsupportedFormat { .. }
            | Error::Io { .. }
            | Error::Json { .. } => 3,
            Error::ShiftRejected(_)
            | Error::Singular(_)
            | Error::Numerical(_)
            | Error::Defective(_)
            | Error::NoStabilizingSolution(_)
            | Error::SpectraCollision(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
