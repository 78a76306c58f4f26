use thiserror::Error;

/// Unified error type for graph construction, sampling, and measurement.
#[derive(Debug, Error)]
pub enum Error {
    /// The graph expression could not be parsed. `offset` is the byte
    /// position in the input where the problem was detected.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A base graph violated a structural requirement (order out of range,
    /// disconnected, self-loop, duplicate edge, ...).
    #[error("invalid base graph: {0}")]
    InvalidBase(String),

    /// The assembled product would exceed the configured vertex cap.
    #[error("product has {n} vertices, exceeding the cap of {cap}")]
    TooLarge { n: u128, cap: u64 },

    /// A probability or other numeric argument was outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two objects that must refer to the same graph do not.
    #[error("mismatched graphs: {0}")]
    GraphMismatch(String),

    /// A size guard on an exact (exponential- or quadratic-cost) routine
    /// was exceeded. Callers distinguish this from misuse because the
    /// computation is well-defined, just refused at this scale.
    #[error("size guard exceeded: {0}")]
    Guard(String),

    /// The requested operation cannot proceed on this input (e.g. the
    /// sample has no component of the requested size).
    #[error("unsatisfiable request: {0}")]
    Unsatisfiable(String),

    /// Experiment configuration was malformed or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A data file (edge list, sample export) was malformed.
    #[error("malformed file {path}: {message}")]
    BadFile { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems
    /// (including malformed expressions, base graphs, and data files),
    /// 3 for guard violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidBase(_)
            | Error::BadFile { .. } => 2,
            Error::Guard(_) | Error::TooLarge { .. } => 3,
            _ => 1,
        }
    }
}
