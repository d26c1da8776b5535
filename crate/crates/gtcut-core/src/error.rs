use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched lengths, out-of-range indices, malformed arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A spec (generator, training, benchmark) failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// Instance file could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Problem too large for the requested solver.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A base solver returned a worse cut than its starting configuration.
    #[error("solver `{solver}` violated its contract: {detail}")]
    ContractViolation { solver: String, detail: String },

    /// Statistical test has no usable data (e.g. all paired differences zero).
    #[error("degenerate test: {0}")]
    DegenerateTest(String),

    /// Approximation ratio is undefined because the reference optimum is zero.
    #[error("undefined ratio: reference optimum is zero")]
    UndefinedRatio,

    /// Model file rejected (bad version, shape, or non-finite entry).
    #[error("model load error: {0}")]
    ModelLoad(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
