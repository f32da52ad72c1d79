//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid level signature: {0}")]
    BadSignature(String),

    #[error("symbol {symbol} out of range for level {level} at row {row}, column {col}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: u32,
        level: u32,
    },

    #[error("{0}")]
    InvalidInput(String),

    #[error("minimum Hamming distance undefined for fewer than 2 rows")]
    TooFewRows,

    #[error("array strength {required} not verified (claimed {claimed}, verified: {verified})")]
    StrengthNotVerified {
        required: u32,
        claimed: u32,
        verified: bool,
    },

    #[error("array is not irredundant at strength {k}: minimum distance {md} < {}", k + 1)]
    NotIrredundant { k: u32, md: usize },

    #[error("strength {k} verification failed on column subset {witness:?}")]
    StrengthFailed { k: u32, witness: Vec<usize> },

    #[error("difference-scheme verification failed: {0}")]
    SchemeFailed(String),

    #[error("order {0} not constructible by built-in methods; supply via file")]
    UnsupportedOrder(usize),

    #[error("construction postcondition violated: {0}")]
    PostconditionFailed(String),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("k = {k} exceeds the Schmidt bound floor(N/2) = {bound} for N = {parties} parties")]
    SchmidtBound { k: u32, bound: u32, parties: usize },

    #[error("outcome {outcome} on party {party} has probability {probability:.3e}, below cutoff")]
    ZeroProbabilityOutcome {
        party: usize,
        outcome: u32,
        probability: f64,
    },

    #[error("dense matrix side {side} exceeds the cap {cap}; restrict the party subset")]
    DenseCapExceeded { side: usize, cap: usize },

    #[error("states are not mutually orthogonal: |<s{i}|s{j}>| = {overlap:.3e}")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },

    #[error("shadow analysis needs odd party count for mixed dimensions (N = {0} is even)")]
    HeterogeneousEvenParties(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
