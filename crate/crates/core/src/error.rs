use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("satellite {flat_id} is not visible at t = {t_s} s")]
    NotVisible { flat_id: usize, t_s: f64 },

    #[error("infeasible instance: edge {edge} has data to send but no visible satellite")]
    Infeasible { edge: usize },

    #[error("satellite {sat} has zero capacity but carries {load_mb} MB")]
    ZeroCapacityLoad { sat: usize, load_mb: f64 },

    #[error("throughput undefined: no data to transmit")]
    NoData,

    #[error("assignment does not fit instance: {0}")]
    Mismatch(String),

    #[error("instance lacks orbital context required by {0}")]
    MissingOrbitalContext(&'static str),

    #[error("enumeration space of {0} assignments exceeds the limit")]
    TooLarge(u128),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("every sampled instant was skipped ({0}); check edge locations against the constellation")]
    NothingFeasible(String),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid { field: field.into(), reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json { context: context.into(), source }
    }

    /// True for errors caused by bad user input (config, edge files) rather
    /// than by a failed run.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid { .. } | Error::Json { .. })
    }
}
