//! Wire format between the coordinator and the boards.
//!
//! ```text
//! +------+-------+--------+-----+---------+-----+
//! | 0x7E | board | opcode | len | payload | xor |
//! +------+-------+--------+-----+---------+-----+
//!    1      1       1       1     0..=255    1
//! ```
//!
//! The trailing byte is the XOR of every byte before it, sync included.

use thiserror::Error;

pub const SYNC: u8 = 0x7E;
pub const HEADER_LEN: usize = 4;
pub const MAX_PAYLOAD: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("expected sync byte 0x7E, found {0:#04x}")]
    MissingSync(u8),
    #[error("truncated frame: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("checksum mismatch: computed {computed:#04x}, frame carries {carried:#04x}")]
    BadChecksum { computed: u8, carried: u8 },
    #[error("unknown opcode {0:#04x}")]
    UnknownOpcode(u8),
    #[error("payload of {0} bytes exceeds 255")]
    PayloadTooLong(usize),
    #[error("malformed {opcode:?} payload")]
    BadPayload { opcode: Opcode },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Opcode {
    SetTarget = 0x01,
    Query = 0x02,
    Event = 0x03,
    Ack = 0x04,
}

impl TryFrom<u8> for Opcode {
    type Error = FrameError;

    fn try_from(byte: u8) -> Result<Self, FrameError> {
        match byte {
            0x01 => Ok(Opcode::SetTarget),
            0x02 => Ok(Opcode::Query),
            0x03 => Ok(Opcode::Event),
            0x04 => Ok(Opcode::Ack),
            other => Err(FrameError::UnknownOpcode(other)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub board_id: u8,
    pub opcode: Opcode,
    payload: Vec<u8>,
}

impl Frame {
    pub fn new(board_id: u8, opcode: Opcode, payload: Vec<u8>) -> Result<Self, FrameError> {
        if payload.len() > MAX_PAYLOAD {
            return Err(FrameError::PayloadTooLong(payload.len()));
        }
        Ok(Frame { board_id, opcode, payload })
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.payload.len() + 1
    }
}

fn xor(bytes: &[u8]) -> u8 {
    bytes.iter().fold(0, |acc, b| acc ^ b)
}

pub fn encode_frame(frame: &Frame) -> Vec<u8> {
    let mut out = Vec::with_capacity(frame.encoded_len());
    out.extend_from_slice(&[SYNC, frame.board_id, frame.opcode as u8, frame.payload.len() as u8]);
    out.extend_from_slice(&frame.payload);
    out.push(xor(&out));
    out
}

/// Decodes the frame at the start of `bytes`, returning it with the number
/// of bytes consumed.
pub fn decode_frame(bytes: &[u8]) -> Result<(Frame, usize), FrameError> {
    match bytes.first() {
        None => return Err(FrameError::Truncated { needed: HEADER_LEN + 1, available: 0 }),
        Some(&b) if b != SYNC => return Err(FrameError::MissingSync(b)),
        _ => {}
    }
    if bytes.len() < HEADER_LEN {
        return Err(FrameError::Truncated { needed: HEADER_LEN + 1, available: bytes.len() });
    }
    let total = HEADER_LEN + bytes[3] as usize + 1;
    if bytes.len() < total {
        return Err(FrameError::Truncated { needed: total, available: bytes.len() });
    }
    let computed = xor(&bytes[..total - 1]);
    let carried = bytes[total - 1];
    if computed != carried {
        return Err(FrameError::BadChecksum { computed, carried });
    }
    let opcode = Opcode::try_from(bytes[2])?;
    let frame = Frame { board_id: bytes[1], opcode, payload: bytes[HEADER_LEN..total - 1].to_vec() };
    Ok((frame, total))
}

/// `SET_TARGET` body: move `channel` to `target_step`, starting `start_us`
/// after submission and taking `duration_us`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetTarget {
    pub channel: u8,
    pub target_step: u16,
    pub start_us: u32,
    pub duration_us: u32,
}

impl SetTarget {
    pub const LEN: usize = 11;

    pub fn to_bytes(self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::LEN);
        out.push(self.channel);
        out.extend_from_slice(&self.target_step.to_be_bytes());
        out.extend_from_slice(&self.start_us.to_be_bytes());
        out.extend_from_slice(&self.duration_us.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FrameError> {
        if bytes.len() != Self::LEN {
            return Err(FrameError::BadPayload { opcode: Opcode::SetTarget });
        }
        let u32_at = |i: usize| u32::from_be_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
        Ok(SetTarget {
            channel: bytes[0],
            target_step: u16::from_be_bytes([bytes[1], bytes[2]]),
            start_us: u32_at(3),
            duration_us: u32_at(7),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum EventCode {
    StopSensor = 1,
    TargetReached = 2,
    Status = 3,
}

/// `EVENT` body: what happened on which channel, and the step count then.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoardEvent {
    pub code: EventCode,
    pub channel: u8,
    pub step: u16,
}

impl BoardEvent {
    pub fn to_bytes(self) -> Vec<u8> {
        let [hi, lo] = self.step.to_be_bytes();
        vec![self.code as u8, self.channel, hi, lo]
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FrameError> {
        let bad = FrameError::BadPayload { opcode: Opcode::Event };
        if bytes.len() != 4 {
            return Err(bad);
        }
        let code = match bytes[0] {
            1 => EventCode::StopSensor,
            2 => EventCode::TargetReached,
            3 => EventCode::Status,
            _ => return Err(bad),
        };
        Ok(BoardEvent { code, channel: bytes[1], step: u16::from_be_bytes([bytes[2], bytes[3]]) })
    }
}
