use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{}: metadata line {line}: {msg}", path.display())]
    Metadata { path: PathBuf, line: usize, msg: String },

    #[error("{}: size mismatch: expected {expected} bytes, found {found}", path.display())]
    SizeMismatch { path: PathBuf, expected: u64, found: u64 },

    #[error("{}: {msg} at {location}", path.display())]
    Malformed {
        path: PathBuf,
        location: String,
        msg: String,
    },

    #[error("{}: non-finite value {value} at {location}", path.display())]
    NonFinite {
        path: PathBuf,
        location: String,
        value: f64,
    },

    #[error("timestep {t} out of range 0..{timesteps}")]
    TimestepOutOfRange { t: usize, timesteps: usize },

    #[error("critical vertex {0} is not a node of the merge tree")]
    NotInTree(usize),

    #[error("invalid parameter: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
