use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Argument(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("benchmark invalid for {config}: sum-form checksum {sum} and cd-form checksum {cd} differ by {relative:e} relative")]
    ChecksumMismatch {
        config: String,
        sum: f64,
        cd: f64,
        relative: f64,
    },
    #[error("Monte Carlo estimate for {config} at {snr_db} dB has zero spread but misses the analytic value ({mc} vs {analytic})")]
    Nonconvergent {
        config: String,
        snr_db: f64,
        mc: f64,
        analytic: f64,
    },
    #[error(transparent)]
    Core(#[from] jacobi_mimo_core::Error),
}

impl Error {
    /// Process exit status: 2 for bad arguments (as clap uses), 3 for a
    /// failed validation, 4 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) => 2,
            Error::ValidationFailed(_) => 3,
            Error::Io { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
