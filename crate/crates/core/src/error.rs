use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown root system {0:?}")]
    UnknownSystem(String),
    #[error("unknown group {0:?} (expected FII, EIV, FI, EI or G2)")]
    UnknownGroup(String),
    #[error("root system self-check failed: {0}")]
    SelfCheck(String),
    #[error("{0} is not a root of the ambient system")]
    NotARoot(String),
    #[error("subsystem is not contained in the ambient positive system")]
    NotContained,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("K-type {0} has a negative coefficient")]
    NotDominant(String),
    #[error("K-type {0} violates the parity condition")]
    Parity(String),
    #[error("invalid infinitesimal character {0}: {1}")]
    InfChar(String, String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("validation error in {row}: {msg}")]
    Validation { row: String, msg: String },
    #[error("duplicate K-type {0} in branching table")]
    DuplicateKType(String),
    #[error("empty branching table")]
    EmptyTable,
    #[error("branching table complete only to height {have}, but height {need} is required")]
    IncompleteHeight { have: i64, need: i64 },
    #[error("pencil direction {0} is not a root")]
    BadDirection(String),
    #[error("n_max must be positive")]
    BadNMax,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
