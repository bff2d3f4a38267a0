use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("hour {0} is outside the 8..=18 day window")]
    HourOutOfRange(u8),
    #[error("rate {0} is outside [0, 1]")]
    RateOutOfRange(f64),
    #[error("series length {0} is outside 3..=10")]
    Length(usize),
    #[error("hours are not contiguous at sample {index}: expected {expected}, found {found}")]
    NonContiguous { index: usize, expected: u8, found: u8 },
    #[error("rates do not rise then fall")]
    NotUnimodal,
}

/// Failure to read a forecast document. `path` names the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error("{path}: malformed document: {message}")]
    Malformed { path: String, message: String },
    #[error("{path}: rate {value} at hour {hour} is outside [0, 1]")]
    RateRange { path: String, hour: u8, value: f64 },
    #[error("{path}: hour {hour} is outside the 8..=18 day window")]
    HourRange { path: String, hour: i64 },
    #[error("{path}: hours are not contiguous (expected {expected}, found {found})")]
    Contiguity { path: String, expected: u8, found: u8 },
    #[error("{path}: {source}")]
    Series { path: String, source: SeriesError },
}

impl LoadError {
    pub fn path(&self) -> &str {
        match self {
            LoadError::Malformed { path, .. }
            | LoadError::RateRange { path, .. }
            | LoadError::HourRange { path, .. }
            | LoadError::Contiguity { path, .. }
            | LoadError::Series { path, .. } => path,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("peak rate is zero; a flat variation cannot be peak-normalized")]
    FlatVariation,
    #[error("rate {rate} exceeds peak rate {peak}")]
    AbovePeak { rate: f64, peak: f64 },
    #[error("position {position} is never emitted in {mode} mode")]
    NotEmittable { position: u8, mode: &'static str },
    #[error("variation {start}..={end} is not part of the series")]
    ForeignVariation { start: u8, end: u8 },
    #[error("position {0} is outside 0..=10")]
    PositionRange(u8),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotionError {
    #[error("targets ({targets}) and current positions ({current}) differ in length")]
    LengthMismatch { targets: usize, current: usize },
    #[error("at most {max} leaves can be planned, got {got}")]
    TooManyLeaves { max: usize, got: usize },
    #[error("invalid device profile: {0}")]
    Profile(String),
}
