use std::path::PathBuf;

/// Errors raised across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("series is empty")]
    Empty,
    #[error("series contains a non-finite value at position {0}")]
    NonFinite(usize),
    #[error("series has zero variance and cannot be normalized")]
    ZeroVariance,
    #[error("series is not normalized (mean {mean:e}, variance {variance})")]
    NotNormalized { mean: f64, variance: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series length {0} is too short (need at least 2 values)")]
    DegenerateLength(usize),

    #[error("invalid alphabet size {0} (must be in 2..=1024)")]
    InvalidAlphabet(usize),
    #[error("invalid standard deviation {0}")]
    InvalidSd(f64),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("probability {0} outside (0, 1)")]
    OutOfDomain(f64),
    #[error("breakpoints must be finite and strictly increasing")]
    UnsortedBreakpoints,
    #[error("breakpoint {value} lies outside (-{limit}, {limit})")]
    BreakpointOutOfRange { value: f64, limit: f64 },

    #[error("{segments} segments do not divide series length {len}")]
    SegmentMismatch { len: usize, segments: usize },
    #[error("season length {season} (x {segments} segments) does not divide series length {len}")]
    SeasonMismatch {
        len: usize,
        season: usize,
        segments: usize,
    },
    #[error("representation shapes differ")]
    ShapeMismatch,
    #[error("alphabet sizes differ ({left} vs {right})")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("empty input")]
    EmptyInput,
    #[error("approximate match distance {approx} is below exact match distance {exact}")]
    InconsistentResults { exact: f64, approx: f64 },
    #[error("pair has zero Euclidean distance")]
    ZeroEuclidean,
    #[error("bit budget {budget} infeasible: {reason}")]
    InfeasibleBudget { budget: f64, reason: String },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("strength {target} not reached within tolerance after {attempts} walks")]
    ConvergenceFailure { target: f64, attempts: usize },

    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: expected {expected} bytes, found {found}")]
    SizeMismatch {
        path: PathBuf,
        expected: u64,
        found: u64,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { expected: u32, found: u32 },
    #[error("index configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("series index {index} out of range (store holds {len})")]
    StoreRead { index: usize, len: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
