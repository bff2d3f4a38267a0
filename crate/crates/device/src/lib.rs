//! Simulated actuation hardware for plant-shaped forecast displays: the
//! ring frame protocol, a deterministic board simulator and a threaded
//! service that drives it from forecast series.

mod event;
pub mod protocol;
mod service;
mod sim;

use plantchart_core::{EncodeError, MotionError};
use thiserror::Error;

pub use event::{to_ndjson, write_ndjson, Event, EventKind};
pub use protocol::{decode_frame, encode_frame, BoardEvent, EventCode, Frame, FrameError, Opcode, SetTarget};
pub use service::{Actuator, DisplayReport, DisplayService};
pub use sim::{
    leaf_board, BoardState, BoardUnit, ControllerState, LeafChannel, SimConfig, GREEN, LEAVES, LED_BOARD,
    MOTOR_BOARDS, RING_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("leaf {0} does not exist on this device")]
    UnknownLeaf(usize),
    #[error("board {board} did not acknowledge")]
    NoAck { board: u8 },
    #[error("time {0} s does not fit a frame")]
    TimingOverflow(f64),
    #[error("device still moving after {seconds} s")]
    Timeout { seconds: f64 },
    #[error("hour {0} has no leaf on this device")]
    NoLeafForHour(u8),
    #[error("actuator thread has stopped")]
    Disconnected,
    #[error(transparent)]
    Motion(#[from] MotionError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}
