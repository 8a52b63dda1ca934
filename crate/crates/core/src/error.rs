use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown element {symbol:?} on record with serial {serial}")]
    UnknownReceptorElement {
        line: usize,
        serial: i64,
        symbol: String,
    },

    #[error("unknown element {symbol:?} (line {line})")]
    UnknownLigandElement { line: usize, symbol: String },

    #[error("counts line declares {declared} {what} but {found} were found")]
    CountsMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },

    #[error("invalid molecular graph: {0}")]
    InvalidGraph(String),

    #[error("{0} contains no heavy atoms")]
    Empty(&'static str),

    #[error("molecule has no ring atoms, so it has no scaffold")]
    NoScaffold,

    #[error("energy is not finite at probe {probe}")]
    NonFiniteEnergy { probe: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
