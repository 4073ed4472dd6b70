use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// Every variant maps onto a stable kebab-case category (see [`Error::category`])
/// which the command line front end prints verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("class count {0} is below the minimum of 3")]
    InvalidClassCount(usize),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("code generation failed: {0}")]
    GenerationFailed(String),
    #[error("invalid code matrix: {0}")]
    InvalidMatrix(String),
    #[error("label {label} out of range for {class_count} classes")]
    InvalidLabel { label: usize, class_count: usize },
    #[error("dimension mismatch: {0}")]
    InvalidDimension(String),
    #[error("covariance rank too low for {requested} components (achievable: {achievable})")]
    RankDeficient { requested: usize, achievable: usize },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("training diverged at epoch {epoch} (last finite epoch: {last_finite_epoch:?})")]
    TrainingDiverged {
        epoch: usize,
        last_finite_epoch: Option<usize>,
    },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("inconsistent images: {0}")]
    InconsistentImages(String),
    #[error("invalid threshold {0}; expected a value in [0, 100]")]
    InvalidThreshold(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn parse(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, err: &std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidClassCount(_) => "invalid-class-count",
            Error::UnsupportedSize(_) => "unsupported-size",
            Error::GenerationFailed(_) => "generation-failed",
            Error::InvalidMatrix(_) => "invalid-matrix",
            Error::InvalidLabel { .. } => "invalid-label",
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::RankDeficient { .. } => "rank-deficient",
            Error::EmptyInput(_) => "empty-input",
            Error::TrainingDiverged { .. } => "training-diverged",
            Error::InsufficientData(_) => "insufficient-data",
            Error::InconsistentImages(_) => "inconsistent-images",
            Error::InvalidThreshold(_) => "invalid-threshold",
            Error::InvalidConfig(_) => "invalid-config",
            Error::Parse { .. } => "parse-error",
            Error::Io { .. } => "io-error",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidClassCount(_)
            | Error::UnsupportedSize(_)
            | Error::InvalidThreshold(_)
            | Error::InvalidConfig(_) => ErrorKind::Usage,
            Error::GenerationFailed(_)
            | Error::RankDeficient { .. }
            | Error::TrainingDiverged { .. } => ErrorKind::Numerical,
            Error::InvalidMatrix(_)
            | Error::InvalidLabel { .. }
            | Error::InvalidDimension(_)
            | Error::EmptyInput(_)
            | Error::InsufficientData(_)
            | Error::InconsistentImages(_)
            | Error::Parse { .. }
            | Error::Io { .. } => ErrorKind::Data,
        }
    }
}
