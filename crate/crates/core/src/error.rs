use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the aggregation math or the BCI pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("interval [{lo}, {hi}] is not a closed subinterval of [0, 1]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("real interval [{lo}, {hi}] has lower bound above upper bound")]
    InvalidRealInterval { lo: f64, hi: f64 },

    #[error("order parameters must differ (alpha = beta = {0})")]
    DegenerateOrder(f64),

    #[error("parameter {name} = {value} outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("reconstructed interval [{lo}, {hi}] leaves [0, 1]")]
    OutOfUnitRange { lo: f64, hi: f64 },

    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),

    #[error("{what} = ({x}, {y}) outside [0, 1]^2")]
    DomainError { what: &'static str, x: f64, y: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("expected {expected} weights, got {got}")]
    WeightLength { expected: usize, got: usize },

    #[error("weights must be nonnegative with at least one positive entry")]
    InvalidWeights,

    #[error("length mismatch: {left} inputs vs {right} weights")]
    LengthMismatch { left: usize, right: usize },

    #[error("no root of the deviation sum in [{lo}, {hi}) (switch point {k})")]
    NoRootInBracket { lo: f64, hi: f64, k: usize },

    #[error("invalid deviation parameters: {0}")]
    InvalidDeviation(String),

    #[error("band {name} [{lo}, {hi}] Hz: {reason}")]
    BandOutOfRange {
        name: String,
        lo: f64,
        hi: f64,
        reason: String,
    },

    #[error("trial has {samples} samples, need at least {needed}")]
    TooShort { samples: usize, needed: usize },

    #[error("covariance is singular: {0}")]
    SingularCovariance(String),

    #[error("need at least two classes with two samples each ({0})")]
    NotEnoughClasses(String),

    #[error("model expects {expected} channels, got {got}")]
    ChannelMismatch { expected: usize, got: usize },

    #[error("model expects {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate features: {0}")]
    DegenerateFeatures(String),

    #[error("shape error: {0}")]
    ShapeError(String),

    #[error("{path}:{line}:{column}: {message}")]
    ParseError {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("channel {0} not present in trial file")]
    ChannelMissing(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("not enough trials: {0}")]
    NotEnoughTrials(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("subject {subject}, partition {partition}: {source}")]
    InPartition {
        subject: String,
        partition: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used by the command line front-end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_)
            | Error::DegenerateOrder(_)
            | Error::ParamOutOfRange { .. }
            | Error::InvalidDeviation(_)
            | Error::WeightLength { .. }
            | Error::InvalidWeights
            | Error::BandOutOfRange { .. } => ErrorClass::Config,
            Error::NoRootInBracket { .. } | Error::OutOfUnitRange { .. } => ErrorClass::Internal,
            Error::InPartition { source, .. } => source.class(),
            _ => ErrorClass::Data,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
