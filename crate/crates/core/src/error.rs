use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the operation's domain (empty set, bad index...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("cluster {cluster} has width {width} exceeding threshold {threshold}")]
    Validation { cluster: usize, width: f64, threshold: f64 },

    #[error(
        "cluster {cluster}: declared center {center} has eccentricity {eccentricity} exceeding threshold {threshold}"
    )]
    InvalidCenter {
        cluster: usize,
        center: usize,
        eccentricity: f64,
        threshold: f64,
    },

    #[error("invalid dissimilarity matrix: {0}")]
    Matrix(String),

    #[error("{}: line {line}, column {column}: {message}", path.display())]
    Ingestion {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("DTW band of width {window} cannot align series of lengths {len_a} and {len_b}")]
    InfeasibleBand { window: usize, len_a: usize, len_b: usize },

    #[error("element {0} is not covered by any homogeneous set")]
    Uncovered(usize),

    #[error("homogeneous set collection was truncated at {cap} sets; optimality cannot be certified")]
    Truncated { cap: usize },

    #[error("inconsistent cover: {0}")]
    CoverInconsistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
