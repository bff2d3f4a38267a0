//! Discrete-time model of the actuation hardware.
//!
//! A coordinator talks to six boards wired as a ring: the LED board first,
//! then five motor boards driving two leaf channels each (leaves 0 and 1 on
//! board 0, and so on), and back to the coordinator. Motor boards are fed
//! through a relay; the coordinator and LED board are always powered.
//! Positions hold when power is cut.

use std::collections::VecDeque;

use plantchart_core::{DeviceProfile, LeafPosition, MotionPlan};
use serde_json::json;

use crate::event::{Event, EventKind};
use crate::protocol::{decode_frame, encode_frame, BoardEvent, EventCode, Frame, Opcode, SetTarget};
use crate::DeviceError;

pub const LEAVES: usize = 10;
pub const MOTOR_BOARDS: u8 = 5;
pub const LED_BOARD: u8 = 5;
/// Order in which frames travel from the coordinator around the ring.
pub const RING_ORDER: [u8; 6] = [LED_BOARD, 0, 1, 2, 3, 4];
pub const GREEN: [u8; 3] = [0, 160, 60];

pub fn leaf_board(leaf: usize) -> (u8, usize) {
    ((leaf / 2) as u8, leaf % 2)
}

#[derive(Clone, Debug, PartialEq)]
struct Scheduled {
    target: u32,
    start_us: u64,
    duration_us: u64,
}

#[derive(Clone, Debug, PartialEq)]
struct Motion {
    from: u32,
    to: u32,
    duration_us: u64,
    active_us: u64,
    travelled: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeafChannel {
    pub current_step: u32,
    pub target_step: u32,
    pub steps_full_range: u32,
    /// Steps travelled since power-up, in either direction.
    pub rotation_count: u64,
    motion: Option<Motion>,
    pending: VecDeque<Scheduled>,
}

impl LeafChannel {
    fn new(steps_full_range: u32, current_step: u32) -> Self {
        LeafChannel {
            current_step,
            target_step: current_step,
            steps_full_range,
            rotation_count: 0,
            motion: None,
            pending: VecDeque::new(),
        }
    }

    pub fn stop_sensor_active(&self) -> bool {
        self.current_step == 0
    }

    pub fn is_moving(&self) -> bool {
        self.motion.is_some()
    }

    pub fn is_busy(&self) -> bool {
        self.motion.is_some() || !self.pending.is_empty()
    }

    pub fn position(&self) -> LeafPosition {
        let (c, full) = (u64::from(self.current_step), u64::from(self.steps_full_range));
        let p = (20 * c + full) / (2 * full);
        LeafPosition::new(p.min(10) as u8).expect("clamped")
    }

    /// Advances over `[t0, t1)`; returns `(time_us, event)` pairs.
    fn advance(&mut self, t0: u64, t1: u64, powered: bool) -> Vec<(u64, EventCode)> {
        let mut out = Vec::new();
        if !powered {
            return out;
        }
        let mut cursor = t0;
        loop {
            if self.motion.is_none() {
                match self.pending.front() {
                    Some(next) if next.start_us < t1 => {
                        let next = self.pending.pop_front().expect("front exists");
                        cursor = cursor.max(next.start_us);
                        self.target_step = next.target;
                        self.motion = Some(Motion {
                            from: self.current_step,
                            to: next.target,
                            duration_us: next.duration_us,
                            active_us: 0,
                            travelled: 0,
                        });
                    }
                    _ => break,
                }
            }
            let m = self.motion.as_mut().expect("motion set above");
            let run = (m.duration_us - m.active_us).min(t1 - cursor);
            m.active_us += run;
            let total = m.from.abs_diff(m.to);
            let travelled = if m.active_us >= m.duration_us {
                total
            } else {
                let frac = m.active_us as f64 / m.duration_us as f64;
                ((f64::from(total) * frac + 1e-9).floor() as u32).min(total)
            };
            let moved = travelled - m.travelled;
            m.travelled = travelled;
            self.rotation_count += u64::from(moved);
            let was = self.current_step;
            self.current_step = if m.to >= m.from { was + moved } else { was - moved };
            cursor += run;
            if was > 0 && self.current_step == 0 {
                out.push((cursor, EventCode::StopSensor));
            }
            if m.active_us >= m.duration_us {
                out.push((cursor, EventCode::TargetReached));
                self.motion = None;
            } else {
                break;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoardUnit {
    Motor([LeafChannel; 2]),
    Led { rgb: [u8; 3] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoardState {
    pub board_id: u8,
    pub powered: bool,
    pub unit: BoardUnit,
}

impl BoardState {
    pub fn channels(&self) -> &[LeafChannel] {
        match &self.unit {
            BoardUnit::Motor(ch) => ch,
            BoardUnit::Led { .. } => &[],
        }
    }

    fn channels_mut(&mut self) -> &mut [LeafChannel] {
        match &mut self.unit {
            BoardUnit::Motor(ch) => ch,
            BoardUnit::Led { .. } => &mut [],
        }
    }

    /// Handles bytes arriving from upstream; returns what goes downstream.
    fn receive(&mut self, bytes: Vec<u8>, now_us: u64) -> Vec<u8> {
        if !self.powered {
            return Vec::new();
        }
        let Ok((frame, _)) = decode_frame(&bytes) else {
            return bytes;
        };
        if frame.board_id != self.board_id {
            return bytes;
        }
        let reply = match frame.opcode {
            Opcode::SetTarget => match SetTarget::from_bytes(frame.payload()) {
                Ok(cmd) => match self.channels_mut().get_mut(cmd.channel as usize) {
                    Some(ch) => {
                        ch.pending.push_back(Scheduled {
                            target: u32::from(cmd.target_step).min(ch.steps_full_range),
                            start_us: now_us + u64::from(cmd.start_us),
                            duration_us: u64::from(cmd.duration_us),
                        });
                        vec![Opcode::SetTarget as u8, cmd.channel]
                    }
                    None => return bytes,
                },
                Err(_) => return bytes,
            },
            Opcode::Query => {
                let mut body = vec![Opcode::Query as u8];
                for ch in self.channels() {
                    body.extend_from_slice(&(ch.current_step as u16).to_be_bytes());
                }
                body
            }
            Opcode::Event | Opcode::Ack => return bytes,
        };
        let ack = Frame::new(self.board_id, Opcode::Ack, reply).expect("short payload");
        encode_frame(&ack)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    /// Seconds per simulation step.
    pub tick: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { tick: 0.01 }
    }
}

impl SimConfig {
    fn tick_us(&self) -> u64 {
        (self.tick * 1e6).round().max(1.0) as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControllerState {
    boards: Vec<BoardState>,
    relay_on: bool,
    clock_us: u64,
    events: Vec<Event>,
    config: SimConfig,
}

impl ControllerState {
    /// Device at rest with every leaf furled.
    pub fn new(profile: &DeviceProfile, config: SimConfig) -> Result<Self, DeviceError> {
        Self::with_positions(profile, config, &[LeafPosition::ZERO; LEAVES])
    }

    pub fn with_positions(
        profile: &DeviceProfile,
        config: SimConfig,
        positions: &[LeafPosition],
    ) -> Result<Self, DeviceError> {
        profile.validate()?;
        if positions.len() != LEAVES {
            return Err(DeviceError::UnknownLeaf(positions.len()));
        }
        let mut boards: Vec<BoardState> = (0..MOTOR_BOARDS)
            .map(|b| {
                let ch = |c: usize| {
                    let leaf = 2 * b as usize + c;
                    LeafChannel::new(profile.steps_full_range[leaf], profile.steps_for(leaf, positions[leaf]))
                };
                BoardState { board_id: b, powered: false, unit: BoardUnit::Motor([ch(0), ch(1)]) }
            })
            .collect();
        boards.push(BoardState { board_id: LED_BOARD, powered: true, unit: BoardUnit::Led { rgb: GREEN } });
        Ok(ControllerState { boards, relay_on: false, clock_us: 0, events: Vec::new(), config })
    }

    pub fn boards(&self) -> &[BoardState] {
        &self.boards
    }

    pub fn board(&self, id: u8) -> &BoardState {
        &self.boards[id as usize]
    }

    pub fn channel(&self, leaf: usize) -> &LeafChannel {
        let (b, c) = leaf_board(leaf);
        &self.boards[b as usize].channels()[c]
    }

    pub fn relay_on(&self) -> bool {
        self.relay_on
    }

    pub fn clock(&self) -> f64 {
        self.clock_us as f64 / 1e6
    }

    pub fn config(&self) -> SimConfig {
        self.config
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_idle(&self) -> bool {
        self.boards.iter().flat_map(|b| b.channels()).all(|c| !c.is_busy())
    }

    pub fn is_moving(&self) -> bool {
        self.boards.iter().flat_map(|b| b.channels()).any(LeafChannel::is_moving)
    }

    pub fn leaf_positions(&self) -> Vec<LeafPosition> {
        (0..LEAVES).map(|l| self.channel(l).position()).collect()
    }

    /// Switches the motor-board relay. Exposed for fault injection; plans
    /// and [`power_gate`](Self::power_gate) drive it in normal operation.
    pub fn set_relay(&mut self, on: bool) {
        if self.relay_on == on {
            return;
        }
        self.relay_on = on;
        for b in self.boards.iter_mut().filter(|b| b.board_id != LED_BOARD) {
            b.powered = on;
        }
        let kind = if on { EventKind::RelayOn } else { EventKind::RelayOff };
        self.events.push(Event::at_us(self.clock_us, None, kind, json!({})));
    }

    /// Sends the frame around the ring and returns what arrives back.
    fn transmit(&mut self, bytes: Vec<u8>) -> Vec<u8> {
        let now = self.clock_us;
        RING_ORDER.iter().fold(bytes, |data, &id| self.boards[id as usize].receive(data, now))
    }

    /// Energizes the relay and issues one `SET_TARGET` per command, in start
    /// order. Times in the plan are relative to the current clock.
    pub fn submit_plan(&mut self, plan: &MotionPlan) -> Result<(), DeviceError> {
        if let Some(c) = plan.commands.iter().find(|c| c.leaf >= LEAVES) {
            return Err(DeviceError::UnknownLeaf(c.leaf));
        }
        if plan.commands.is_empty() {
            return Ok(());
        }
        self.set_relay(true);
        let mut order: Vec<_> = plan.commands.iter().collect();
        order.sort_by(|a, b| a.start_time.total_cmp(&b.start_time));
        for cmd in order {
            let (board, channel) = leaf_board(cmd.leaf);
            let full = self.channel(cmd.leaf).steps_full_range;
            let target = (u32::from(cmd.to.value()) * full + 5) / 10;
            let body = SetTarget {
                channel: channel as u8,
                target_step: target as u16,
                start_us: to_us(cmd.start_time)?,
                duration_us: to_us(cmd.duration)?,
            };
            let frame = Frame::new(board, Opcode::SetTarget, body.to_bytes()).expect("11-byte payload");
            let bytes = encode_frame(&frame);
            self.events.push(Event::at_us(
                self.clock_us,
                None,
                EventKind::FrameTx,
                json!({ "leaf": cmd.leaf, "to": cmd.to.value(), "target_step": target, "frame": hex::encode(&bytes) }),
            ));
            let back = self.transmit(bytes);
            match decode_frame(&back) {
                Ok((reply, _)) if reply.opcode == Opcode::Ack => self.events.push(Event::at_us(
                    self.clock_us,
                    Some(reply.board_id),
                    EventKind::FrameRx,
                    json!({ "leaf": cmd.leaf, "frame": hex::encode(&back) }),
                )),
                _ => {
                    self.events.push(Event::at_us(
                        self.clock_us,
                        Some(board),
                        EventKind::FrameLost,
                        json!({ "leaf": cmd.leaf }),
                    ));
                    return Err(DeviceError::NoAck { board });
                }
            }
        }
        Ok(())
    }

    /// Advances the clock by `dt` seconds. Non-positive `dt` is ignored.
    pub fn tick(&mut self, dt: f64) {
        let dt_us = (dt * 1e6).round();
        if dt_us.is_nan() || dt_us < 1.0 {
            return;
        }
        let (t0, t1) = (self.clock_us, self.clock_us + dt_us as u64);
        let mut happened = Vec::new();
        for b in 0..MOTOR_BOARDS as usize {
            let powered = self.boards[b].powered;
            for (c, ch) in self.boards[b].channels_mut().iter_mut().enumerate() {
                for (t, code) in ch.advance(t0, t1, powered) {
                    happened.push((t, b as u8, c, code, ch.current_step));
                }
            }
        }
        happened.sort_by_key(|(t, b, c, code, _)| (*t, *b, *c, *code as u8));
        for (t, board, channel, code, step) in happened {
            let body = BoardEvent { code, channel: channel as u8, step: step as u16 };
            let frame = encode_frame(&Frame::new(board, Opcode::Event, body.to_bytes()).expect("short"));
            // Downstream boards forward the frame on to the coordinator.
            let kind = match code {
                EventCode::StopSensor => EventKind::StopSensor,
                _ => EventKind::TargetReached,
            };
            self.events.push(Event::at_us(
                t,
                Some(board),
                kind,
                json!({ "leaf": 2 * board as usize + channel, "step": step, "frame": hex::encode(&frame) }),
            ));
        }
        self.clock_us = t1;
    }

    /// Cuts motor-board power when nothing is moving or scheduled.
    pub fn power_gate(&mut self) {
        if self.relay_on && self.is_idle() {
            self.set_relay(false);
        }
    }

    /// Ticks until every channel is idle, then gates power. Returns the
    /// simulated seconds that elapsed.
    pub fn run_until_idle(&mut self, max_seconds: f64) -> Result<f64, DeviceError> {
        let start = self.clock_us;
        let tick = self.config.tick_us();
        let limit = start + (max_seconds * 1e6) as u64;
        while !self.is_idle() {
            if self.clock_us >= limit || !self.relay_on {
                return Err(DeviceError::Timeout { seconds: max_seconds });
            }
            self.tick(tick as f64 / 1e6);
        }
        self.power_gate();
        Ok((self.clock_us - start) as f64 / 1e6)
    }

    /// Sends a `QUERY` to a motor board and returns its channel steps.
    pub fn query(&mut self, board: u8) -> Result<Vec<u16>, DeviceError> {
        let bytes = encode_frame(&Frame::new(board, Opcode::Query, Vec::new()).expect("empty"));
        let back = self.transmit(bytes);
        match decode_frame(&back) {
            Ok((reply, _)) if reply.opcode == Opcode::Ack && reply.payload().first() == Some(&(Opcode::Query as u8)) => {
                Ok(reply.payload()[1..].chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect())
            }
            _ => Err(DeviceError::NoAck { board }),
        }
    }
}

fn to_us(seconds: f64) -> Result<u32, DeviceError> {
    let us = (seconds * 1e6).round();
    if (0.0..=f64::from(u32::MAX)).contains(&us) {
        Ok(us as u32)
    } else {
        Err(DeviceError::TimingOverflow(seconds))
    }
}
