//! Timed actuation plans and low-fidelity animation timelines.
//!
//! Hours actuate strictly one after another in hour order. Physical devices
//! take time proportional to the distance travelled; graphical ones spend a
//! constant time per hour.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::LeafPosition;
use crate::MotionError;

pub const LEAF_COUNT: usize = 10;
pub const DEFAULT_STEPS: u32 = 216;
pub const MIN_STEPS: u32 = 185;
pub const MAX_STEPS: u32 = 230;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviceKind {
    Physical,
    Graphical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub name: String,
    pub kind: DeviceKind,
    /// Motor steps from furled to flat, per leaf.
    pub steps_full_range: Vec<u32>,
    /// Steps per second of physical motion.
    pub step_rate: f64,
    /// Seconds per hour for constant-time graphical motion.
    pub per_rate_frame_time: f64,
    pub reset_before_next_variation: bool,
}

/// Step rate whose full 0 to 10 sequences best match reported
/// `(hours, total seconds)` pairs, in the least-squares sense.
pub fn calibrate_step_rate(steps_full_range: u32, reported: &[(usize, f64)]) -> f64 {
    let (num, den) = reported.iter().fold((0.0, 0.0), |(num, den), &(hours, total)| {
        let n = hours as f64;
        (num + n * total, den + n * n)
    });
    let seconds_per_leaf = num / den;
    f64::from(steps_full_range) / seconds_per_leaf
}

impl DeviceProfile {
    fn physical(name: &str, reported: &[(usize, f64)]) -> Self {
        DeviceProfile {
            name: name.to_string(),
            kind: DeviceKind::Physical,
            steps_full_range: vec![DEFAULT_STEPS; LEAF_COUNT],
            step_rate: calibrate_step_rate(DEFAULT_STEPS, reported),
            per_rate_frame_time: 2.0,
            reset_before_next_variation: false,
        }
    }

    fn graphical(name: &str) -> Self {
        DeviceProfile {
            name: name.to_string(),
            kind: DeviceKind::Graphical,
            steps_full_range: vec![DEFAULT_STEPS; LEAF_COUNT],
            step_rate: 120.0,
            per_rate_frame_time: 2.0,
            reset_before_next_variation: true,
        }
    }

    /// Leaf prototype, sped up to 19 s for ten hours and 14 s for eight.
    pub fn plantform() -> Self {
        Self::physical("plantform", &[(10, 19.0), (8, 14.0)])
    }

    /// Ring prototype: 12 s for ten hours, 8 s for eight.
    pub fn cairnform() -> Self {
        Self::physical("cairnform", &[(10, 12.0), (8, 8.0)])
    }

    pub fn plantscreen() -> Self {
        Self::graphical("plantscreen")
    }

    pub fn cairnscreen() -> Self {
        Self::graphical("cairnscreen")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "plantform" => Some(Self::plantform()),
            "cairnform" => Some(Self::cairnform()),
            "plantscreen" => Some(Self::plantscreen()),
            "cairnscreen" => Some(Self::cairnscreen()),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 4] = ["plantform", "cairnform", "plantscreen", "cairnscreen"];

    /// Replaces every leaf calibration with a uniform draw from 185..=230.
    pub fn with_random_calibration<R: Rng>(mut self, rng: &mut R) -> Self {
        for steps in &mut self.steps_full_range {
            *steps = rng.gen_range(MIN_STEPS..=MAX_STEPS);
        }
        self
    }

    pub fn validate(&self) -> Result<(), MotionError> {
        if self.steps_full_range.len() != LEAF_COUNT {
            return Err(MotionError::Profile(format!(
                "expected {LEAF_COUNT} leaf calibrations, got {}",
                self.steps_full_range.len()
            )));
        }
        if let Some(bad) = self.steps_full_range.iter().find(|s| !(MIN_STEPS..=MAX_STEPS).contains(*s)) {
            return Err(MotionError::Profile(format!("step count {bad} outside {MIN_STEPS}..={MAX_STEPS}")));
        }
        if !(self.step_rate.is_finite() && self.step_rate > 0.0) {
            return Err(MotionError::Profile(format!("step rate {} must be positive", self.step_rate)));
        }
        if !(self.per_rate_frame_time.is_finite() && self.per_rate_frame_time > 0.0) {
            return Err(MotionError::Profile(format!(
                "frame time {} must be positive",
                self.per_rate_frame_time
            )));
        }
        Ok(())
    }

    /// Motor step holding `position` on `leaf`, rounded half up.
    pub fn steps_for(&self, leaf: usize, position: LeafPosition) -> u32 {
        let full = self.steps_full_range[leaf];
        (u32::from(position.value()) * full + 5) / 10
    }

    fn physical_duration(&self, leaf: usize, from: LeafPosition, to: LeafPosition) -> f64 {
        let delta = self.steps_for(leaf, from).abs_diff(self.steps_for(leaf, to));
        f64::from(delta) / self.step_rate
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionCommand {
    pub leaf: usize,
    pub from: LeafPosition,
    pub to: LeafPosition,
    pub start_time: f64,
    pub duration: f64,
}

impl MotionCommand {
    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionPlan {
    pub profile: DeviceProfile,
    pub commands: Vec<MotionCommand>,
    pub total_duration: f64,
}

impl MotionPlan {
    pub fn empty(profile: &DeviceProfile) -> Self {
        MotionPlan { profile: profile.clone(), commands: Vec::new(), total_duration: 0.0 }
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    /// Leaf positions after the plan runs from `current`.
    pub fn end_positions(&self, current: &[LeafPosition]) -> Vec<LeafPosition> {
        let mut out = current.to_vec();
        for c in &self.commands {
            if c.leaf < out.len() {
                out[c.leaf] = c.to;
            }
        }
        out
    }

    /// Continuous positions (0..=10) at time `t`, interpolating linearly
    /// inside each command.
    pub fn positions_at(&self, current: &[LeafPosition], t: f64) -> Vec<f64> {
        let mut out: Vec<f64> = current.iter().map(|p| f64::from(p.value())).collect();
        for c in &self.commands {
            if c.leaf >= out.len() || t < c.start_time {
                continue;
            }
            let (from, to) = (f64::from(c.from.value()), f64::from(c.to.value()));
            out[c.leaf] = if t >= c.end_time() || c.duration <= 0.0 {
                to
            } else {
                from + (to - from) * (t - c.start_time) / c.duration
            };
        }
        out
    }

    /// `self` followed by `next`, with `next` shifted to start when `self` ends.
    pub fn then(mut self, next: MotionPlan) -> MotionPlan {
        let offset = self.total_duration;
        self.commands.extend(next.commands.into_iter().map(|mut c| {
            c.start_time += offset;
            c
        }));
        self.total_duration += next.total_duration;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    /// Parses a plan document and checks its ordering invariants.
    pub fn from_json(text: &str) -> Result<MotionPlan, MotionError> {
        let plan: MotionPlan = serde_json::from_str(text).map_err(|e| MotionError::Profile(e.to_string()))?;
        plan.profile.validate()?;
        plan.check()?;
        Ok(plan)
    }

    pub fn check(&self) -> Result<(), MotionError> {
        let bad = |msg: String| Err(MotionError::Profile(msg));
        if self.commands.windows(2).any(|w| w[1].start_time < w[0].start_time) {
            return bad("commands are not sorted by start time".into());
        }
        for (i, c) in self.commands.iter().enumerate() {
            if c.leaf >= LEAF_COUNT {
                return bad(format!("command {i} targets leaf {}", c.leaf));
            }
            if !(c.start_time >= 0.0 && c.duration >= 0.0) {
                return bad(format!("command {i} has negative timing"));
            }
            let overlap = self.commands[..i]
                .iter()
                .any(|p| p.leaf == c.leaf && p.end_time() > c.start_time + 1e-9);
            if overlap {
                return bad(format!("command {i} overlaps an earlier command on leaf {}", c.leaf));
            }
        }
        let end = self.commands.iter().map(MotionCommand::end_time).fold(0.0, f64::max);
        if (end - self.total_duration).abs() > 1e-6 {
            return bad(format!("total duration {} differs from last command end {end}", self.total_duration));
        }
        Ok(())
    }
}

fn check_lengths(targets: &[LeafPosition], current: &[LeafPosition]) -> Result<(), MotionError> {
    if targets.len() != current.len() {
        return Err(MotionError::LengthMismatch { targets: targets.len(), current: current.len() });
    }
    if targets.len() > LEAF_COUNT {
        return Err(MotionError::TooManyLeaves { max: LEAF_COUNT, got: targets.len() });
    }
    Ok(())
}

fn sequential(
    profile: &DeviceProfile,
    moves: impl Iterator<Item = (usize, LeafPosition, LeafPosition)>,
    duration: impl Fn(usize, LeafPosition, LeafPosition) -> f64,
) -> MotionPlan {
    let mut clock = 0.0;
    let mut commands = Vec::new();
    for (leaf, from, to) in moves {
        let d = duration(leaf, from, to);
        commands.push(MotionCommand { leaf, from, to, start_time: clock, duration: d });
        clock += d;
    }
    MotionPlan { profile: profile.clone(), commands, total_duration: clock }
}

/// Rate-proportional plan: each moving leaf takes its step distance divided
/// by the profile's step rate. Unchanged leaves get no command.
pub fn plan_physical(
    targets: &[LeafPosition],
    current: &[LeafPosition],
    profile: &DeviceProfile,
) -> Result<MotionPlan, MotionError> {
    check_lengths(targets, current)?;
    let moves = (0..targets.len()).filter(|&i| targets[i] != current[i]).map(|i| (i, current[i], targets[i]));
    Ok(sequential(profile, moves, |leaf, from, to| profile.physical_duration(leaf, from, to)))
}

/// Constant-time plan: every hour animates for `per_rate_frame_time`,
/// whatever its distance.
pub fn plan_graphical(
    targets: &[LeafPosition],
    current: &[LeafPosition],
    profile: &DeviceProfile,
) -> Result<MotionPlan, MotionError> {
    check_lengths(targets, current)?;
    let moves = (0..targets.len()).map(|i| (i, current[i], targets[i]));
    Ok(sequential(profile, moves, |_, _, _| profile.per_rate_frame_time))
}

/// Dispatches on the profile's device kind.
pub fn plan(targets: &[LeafPosition], current: &[LeafPosition], profile: &DeviceProfile) -> Result<MotionPlan, MotionError> {
    match profile.kind {
        DeviceKind::Physical => plan_physical(targets, current, profile),
        DeviceKind::Graphical => plan_graphical(targets, current, profile),
    }
}

/// Moves from one displayed variation to the next. Profiles that reset
/// first retract every raised leaf to 0, then display `next` from zero.
pub fn transition_plan(
    current: &[LeafPosition],
    next: &[LeafPosition],
    profile: &DeviceProfile,
) -> Result<MotionPlan, MotionError> {
    check_lengths(next, current)?;
    if !profile.reset_before_next_variation {
        return plan(next, current, profile);
    }
    let zeros = vec![LeafPosition::ZERO; current.len()];
    let retract = (0..current.len())
        .filter(|&i| current[i] != LeafPosition::ZERO)
        .map(|i| (i, current[i], LeafPosition::ZERO));
    let reset = match profile.kind {
        DeviceKind::Physical => sequential(profile, retract, |l, f, t| profile.physical_duration(l, f, t)),
        DeviceKind::Graphical => sequential(profile, retract, |_, _, _| profile.per_rate_frame_time),
    };
    Ok(reset.then(plan(next, &zeros, profile)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimelineFrame {
    pub timestamp: f64,
    /// Extension of each stem, in points.
    pub extensions: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameTimeline {
    pub frames: Vec<TimelineFrame>,
    pub tick: f64,
}

impl FrameTimeline {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.frames.last().map_or(0.0, |f| f.timestamp)
    }
}

pub const LOWFI_STEP_PT: f64 = 20.0;
pub const LOWFI_TICK_S: f64 = 0.32;

/// Grows one stem by `extension_delta` points in `tick_step` increments,
/// one frame per `tick`. A final partial increment still gets its frame.
pub fn lowfi_timeline(extension_delta: f64, tick_step: f64, tick: f64) -> FrameTimeline {
    lowfi_series_timeline(&[0.0], &[extension_delta.max(0.0)], tick_step, tick)
}

/// Moves every stem from `from` toward `to` by at most `tick_step` points
/// per frame, all stems together, until each reaches its target.
pub fn lowfi_series_timeline(from: &[f64], to: &[f64], tick_step: f64, tick: f64) -> FrameTimeline {
    let longest = from.iter().zip(to).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max);
    let count = (longest / tick_step - 1e-9).ceil().max(0.0) as usize;
    let frames = (1..=count)
        .map(|k| {
            let travelled = k as f64 * tick_step;
            let extensions = from
                .iter()
                .zip(to)
                .map(|(a, b)| if (b - a).abs() <= travelled { *b } else { a + travelled * (b - a).signum() })
                .collect();
            TimelineFrame { timestamp: k as f64 * tick, extensions }
        })
        .collect();
    FrameTimeline { frames, tick }
}
