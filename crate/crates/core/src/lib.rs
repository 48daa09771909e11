//! QUBO encodings and annealing-style samplers for classical database
//! optimization problems: join ordering, transaction scheduling, and
//! cloud task/VM allocation.
//!
//! Every problem module follows the same four-phase pipeline: preprocess
//! the instance, encode it as a [`qubo::QuboModel`], optimize it with a
//! sampler from [`sampler`], and read the low-energy samples back out as
//! domain solutions. Each module also ships an exhaustive oracle so
//! encodings can be verified against ground truth at small sizes.

pub mod cloudalloc;
pub mod joinorder;
pub mod qubo;
pub mod sampler;
pub mod txsched;

use thiserror::Error;

/// Errors shared across model construction, samplers, and encoders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("coefficient at ({i}, {j}) must be finite, got {value}")]
    NonFiniteCoefficient { i: usize, j: usize, value: f64 },

    #[error("assignment has {got} bits but the model has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} supports at most {limit} variables, got {n}")]
    TooManyVariables {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown id: {0}")]
    UnknownId(String),
}

pub type Result<T> = std::result::Result<T, Error>;
