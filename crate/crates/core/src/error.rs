use std::path::PathBuf;

use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum SimError {
    /// A precondition on physical inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The analytic density-operator assembly produced a trace that deviates
    /// from one by more than the guard tolerance. This surfaces an internal
    /// inconsistency of the coefficient set instead of hiding it behind a
    /// renormalization.
    #[error("closed-form inconsistency at tau={tau}: trace deviates from 1 by {deviation:e}")]
    ClosedFormInconsistency { tau: f64, deviation: f64 },

    /// A numerical invariant that should hold by construction failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// An error attached to a specific point of a time sweep.
    #[error("sweep failed at tau={tau}: {source}")]
    SweepPoint {
        tau: f64,
        #[source]
        source: Box<SimError>,
    },

    /// Bad command-line or config-file input.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;

impl SimError {
    pub fn at_tau(self, tau: f64) -> SimError {
        SimError::SweepPoint {
            tau,
            source: Box::new(self),
        }
    }

    /// Process exit code for the CLI: 1 invariant failure, 2 usage, 3 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Usage(_) => 2,
            SimError::Io { .. } => 3,
            SimError::SweepPoint { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
