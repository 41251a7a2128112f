use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input does not have the shape an operation needs (non-square, nonzero
    /// diagonal, loops, 2-cycles, out-of-range ids...).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Well-formed integer matrix that admits no positive diagonal witness.
    #[error("not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("integer overflow during {0}")]
    Overflow(&'static str),

    /// Diagram mutation hit a configuration no exchange matrix realizes.
    #[error("diagram is not realizable by an exchange matrix: {0}")]
    NotRealizable(String),

    /// A gluing identification breaks one of the numbered gluing rules.
    #[error("gluing rule {rule} violated: {detail}")]
    Gluing { rule: u8, detail: String },

    #[error("unfolding violation: {0}")]
    Unfolding(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("search budget of {0} steps exhausted")]
    Budget(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
