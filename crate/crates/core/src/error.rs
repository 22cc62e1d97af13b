use thiserror::Error;

/// Errors produced by raster construction, file parsing, and the
/// numeric operators in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("unsupported format version {found:?} (expected {expected:?})")]
    UnsupportedVersion { found: String, expected: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("grid transform is singular (zero determinant)")]
    SingularTransform,

    #[error("correlation undefined: zero variance in {0} raster")]
    ZeroVariance(&'static str),

    #[error("too many pyramid levels: {requested} for {width}x{height} raster")]
    TooManyLevels {
        requested: usize,
        width: usize,
        height: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            reason: reason.into(),
        }
    }

    pub(crate) fn dims(reason: impl Into<String>) -> Self {
        Error::DimensionMismatch(reason.into())
    }

    pub(crate) fn arg(reason: impl Into<String>) -> Self {
        Error::InvalidArgument(reason.into())
    }
}
