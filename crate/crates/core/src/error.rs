use thiserror::Error;

use crate::lp::LpError;

/// Errors produced by the data, measure and construction layers.
#[derive(Debug, Error)]
pub enum MuError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("data matrix is identically zero")]
    ZeroMatrix,

    #[error("parameter vector is zero")]
    ZeroDirection,

    #[error("linear program: {0}")]
    Lp(#[from] LpError),

    #[error("linear program ended with status {0:?}")]
    LpStatus(crate::lp::LpStatus),

    #[error("sketch is rank deficient (numerical rank {rank} < {cols} columns)")]
    RankDeficientSketch { rank: usize, cols: usize },

    #[error("near-orthogonal sampling exhausted {retries} retries (best max |<M_i, M_j>| = {best}, threshold {threshold})")]
    RetriesExhausted {
        retries: usize,
        best: f64,
        threshold: f64,
    },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MuError>;
