use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("codebook sparsity mismatch: user {user} resource {resource} (declared {declared}, codewords {observed})")]
    SparsityMismatch {
        user: usize,
        resource: usize,
        declared: bool,
        observed: bool,
    },

    #[error("codebook of user {user} has average energy {energy}, expected 1")]
    EnergyNormalization { user: usize, energy: f64 },

    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("symbol index {index} of user {user} out of range for alphabet size {alphabet}")]
    SymbolOutOfRange {
        user: usize,
        index: usize,
        alphabet: usize,
    },

    #[error("noise variance must be positive and finite, got {0}")]
    NoiseVariance(f64),

    #[error("ML detection would enumerate {combinations} hypotheses (limit 2^24)")]
    MlGuard { combinations: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid power allocation: {0}")]
    PowerAllocation(String),

    #[error("malformed alist: {0}")]
    Alist(String),

    #[error("parity-check matrix has {rows} rows but GF(2) rank {rank}")]
    RankDeficient { rows: usize, rank: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the environment (files, sockets) rather than of the inputs.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
