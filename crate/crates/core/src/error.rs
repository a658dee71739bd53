use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("trace has no samples")]
    EmptyTrace,
    #[error("trace has too few samples ({0}) for this operation")]
    DegenerateTrace(usize),
    #[error("expected an accelerometer trace")]
    NotAccelerometer,

    #[error("bad timestamp {0:?}, expected MM:SS:FFF")]
    BadTimestamp(String),
    #[error("line {line}: {reason}")]
    BadRow { line: usize, reason: String },
    #[error("line {0}: timestamp decreases after minute-wrap unwrap")]
    NonMonotonic(usize),
    #[error("timestamp {0} ms cannot be written as MM:SS:FFF")]
    TimestampOverflow(u64),
    #[error("bad file name segment {segment:?} in {name:?}")]
    BadFilename { name: String, segment: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("filter latency must be positive, got {0}")]
    NonPositiveLatency(f64),
    #[error("filter alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),

    #[error("need at least {needed} values, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("histogram of an empty sequence")]
    Empty,
    #[error("signal of {len} samples is shorter than a {window}-sample peak window")]
    SignalTooShort { len: usize, window: usize },
    #[error("peak window around index {center} leaves the signal ({len} samples)")]
    WindowOutOfBounds { center: usize, len: usize },

    #[error("unknown activity name {0:?}")]
    UnknownActivityName(String),
    #[error("reference table: {0}")]
    BadReference(String),
    #[error("transport mode {0} has no reference row")]
    UnsupportedMode(crate::trace::TransportMode),

    #[error("bad generator profile: {0}")]
    BadProfile(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
