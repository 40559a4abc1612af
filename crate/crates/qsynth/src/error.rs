//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by matrix construction, synthesis engines, and I/O.
#[derive(Error, Debug)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds tolerance {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("subspace index {j} out of range for dimension {dim}")]
    SubspaceOutOfRange { j: usize, dim: usize },

    #[error("degenerate row: remainder norm {s:.3e} too small to define a factor")]
    DegenerateRow { s: f64 },

    #[error("inconsistent row: |y/s| = {ratio} exceeds 1 beyond the clamp band")]
    InconsistentRow { ratio: f64 },

    #[error("unknown gateset {0:?}")]
    UnknownGateset(String),

    #[error("gateset not supported for this operation: {0}")]
    UnsupportedGateset(String),

    #[error(
        "instantiation failure at target ({row},{col}): no structure up to {k_max} pulses \
         reached the per-element threshold after {restarts} restarts"
    )]
    InstantiationFailure {
        row: usize,
        col: usize,
        k_max: u32,
        restarts: usize,
    },

    #[error("synthesized circuit failed final verification: distance {distance:.3e} > {tol:.3e}")]
    VerificationFailure { distance: f64, tol: f64 },

    #[error("search budget exceeded: {0}")]
    Timeout(String),

    #[error("dimension {dim} not supported: {reason}")]
    UnsupportedDimension { dim: usize, reason: String },

    #[error("clifford generator self-check failed for d={dim}: {which}")]
    GeneratorSelfCheck { dim: usize, which: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
