use plantchart_core::{EncodeError, LoadError, MotionError, SeriesError};
use plantchart_device::DeviceError;
use plantchart_render::RenderError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ENCODING: i32 = 3;
pub const EXIT_SIMULATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Encoding(String),
    #[error("{0}")]
    Simulation(String),
    /// The reader of our output went away; not worth reporting.
    #[error("output closed")]
    ClosedOutput,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::ClosedOutput => EXIT_OK,
            CliError::Encoding(_) => EXIT_ENCODING,
            CliError::Simulation(_) => EXIT_SIMULATION,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::ClosedOutput;
        }
        CliError::Input(e.to_string())
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<EncodeError> for CliError {
    fn from(e: EncodeError) -> Self {
        CliError::Encoding(e.to_string())
    }
}

impl From<MotionError> for CliError {
    fn from(e: MotionError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DeviceError> for CliError {
    fn from(e: DeviceError) -> Self {
        match e {
            DeviceError::Encode(inner) => CliError::Encoding(inner.to_string()),
            DeviceError::NoLeafForHour(_) | DeviceError::Motion(_) => CliError::Input(e.to_string()),
            other => CliError::Simulation(other.to_string()),
        }
    }
}
