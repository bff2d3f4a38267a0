use std::sync::mpsc::{self, Receiver, Sender};
use std::thread::{self, JoinHandle};

use log::{debug, info};
use plantchart_core::{
    encode_series, segment_variations, transition_plan, DeviceProfile, EncodingMode, ForecastSeries, LeafPosition,
    MotionPlan,
};

use crate::event::Event;
use crate::sim::{ControllerState, LEAVES};
use crate::DeviceError;

const FIRST_LEAF_HOUR: u8 = 8;

enum Request {
    Submit(MotionPlan, Sender<Result<(), DeviceError>>),
    RunUntilIdle(f64, Sender<Result<f64, DeviceError>>),
    Positions(Sender<Vec<LeafPosition>>),
    Shutdown,
}

/// Owns a [`ControllerState`] on a worker thread. New log entries are
/// streamed out as they happen.
pub struct Actuator {
    requests: Sender<Request>,
    events: Receiver<Event>,
    worker: Option<JoinHandle<ControllerState>>,
}

impl Actuator {
    pub fn spawn(mut state: ControllerState) -> Self {
        let (req_tx, req_rx) = mpsc::channel::<Request>();
        let (ev_tx, ev_rx) = mpsc::channel();
        let worker = thread::spawn(move || {
            let mut sent = state.events().len();
            for req in req_rx {
                match req {
                    Request::Submit(plan, reply) => {
                        let _ = reply.send(state.submit_plan(&plan));
                    }
                    Request::RunUntilIdle(limit, reply) => {
                        let _ = reply.send(state.run_until_idle(limit));
                    }
                    Request::Positions(reply) => {
                        let _ = reply.send(state.leaf_positions());
                    }
                    Request::Shutdown => break,
                }
                for e in &state.events()[sent..] {
                    let _ = ev_tx.send(e.clone());
                }
                sent = state.events().len();
            }
            state
        });
        Actuator { requests: req_tx, events: ev_rx, worker: Some(worker) }
    }

    fn call<T>(&self, make: impl FnOnce(Sender<T>) -> Request) -> Result<T, DeviceError> {
        let (tx, rx) = mpsc::channel();
        self.requests.send(make(tx)).map_err(|_| DeviceError::Disconnected)?;
        rx.recv().map_err(|_| DeviceError::Disconnected)
    }

    pub fn submit(&self, plan: MotionPlan) -> Result<(), DeviceError> {
        self.call(|tx| Request::Submit(plan, tx))?
    }

    pub fn run_until_idle(&self, max_seconds: f64) -> Result<f64, DeviceError> {
        self.call(|tx| Request::RunUntilIdle(max_seconds, tx))?
    }

    pub fn positions(&self) -> Result<Vec<LeafPosition>, DeviceError> {
        self.call(Request::Positions)
    }

    /// Log entries produced since the last drain.
    pub fn drain_events(&self) -> Vec<Event> {
        self.events.try_iter().collect()
    }

    /// Stops the worker and hands back the final state.
    pub fn shutdown(mut self) -> ControllerState {
        let _ = self.requests.send(Request::Shutdown);
        self.worker.take().expect("worker present").join().expect("actuator thread panicked")
    }
}

impl Drop for Actuator {
    fn drop(&mut self) {
        if let Some(w) = self.worker.take() {
            let _ = self.requests.send(Request::Shutdown);
            let _ = w.join();
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisplayReport {
    pub plans: Vec<MotionPlan>,
    /// Simulated seconds spent moving, summed over all plans.
    pub elapsed: f64,
    pub final_positions: Vec<LeafPosition>,
}

/// Shows each variation of incoming series on a simulated device, one
/// after another. Leaf `i` shows hour `8 + i`; a display starts from
/// whatever the previous one left raised.
pub struct DisplayService {
    actuator: Actuator,
    profile: DeviceProfile,
    mode: EncodingMode,
    current: Vec<LeafPosition>,
    time_limit: f64,
}

impl DisplayService {
    pub fn new(state: ControllerState, profile: DeviceProfile, mode: EncodingMode) -> Self {
        let current = state.leaf_positions();
        DisplayService { actuator: Actuator::spawn(state), profile, mode, current, time_limit: 3600.0 }
    }

    pub fn positions(&self) -> &[LeafPosition] {
        &self.current
    }

    pub fn profile(&self) -> &DeviceProfile {
        &self.profile
    }

    pub fn drain_events(&self) -> Vec<Event> {
        self.actuator.drain_events()
    }

    /// Checks that every hour of `series` maps to a leaf.
    pub fn leaves_for<T: plantchart_core::Scalar>(series: &ForecastSeries<T>) -> Result<Vec<usize>, DeviceError> {
        series
            .hours()
            .into_iter()
            .map(|h| {
                let idx = h.hour().checked_sub(FIRST_LEAF_HOUR).map(usize::from);
                idx.filter(|&i| i < LEAVES).ok_or(DeviceError::NoLeafForHour(h.hour()))
            })
            .collect()
    }

    pub fn display<T: plantchart_core::Scalar>(
        &mut self,
        series: &ForecastSeries<T>,
    ) -> Result<DisplayReport, DeviceError> {
        let leaves = Self::leaves_for(series)?;
        let mut report = DisplayReport { plans: Vec::new(), elapsed: 0.0, final_positions: Vec::new() };
        for variation in segment_variations(series) {
            let encoded = encode_series(series, &variation, self.mode)?;
            let mut targets = [LeafPosition::ZERO; LEAVES];
            for (leaf, pos) in leaves.iter().zip(encoded) {
                targets[*leaf] = pos;
            }
            // Plan over the leaves this series uses plus any still raised,
            // so shorter days animate only their own hours.
            let raised = |i: &usize| self.current[*i] != LeafPosition::ZERO;
            let lo = (0..LEAVES).find(raised).map_or(leaves[0], |i| i.min(leaves[0]));
            let hi = (0..LEAVES).rev().find(raised).map_or(leaves[leaves.len() - 1], |i| i.max(leaves[leaves.len() - 1]));
            let mut plan = transition_plan(&self.current[lo..=hi], &targets[lo..=hi], &self.profile)?;
            for c in &mut plan.commands {
                c.leaf += lo;
            }
            debug!("variation {}..{}: {} commands", variation.start().hour(), variation.end().hour(), plan.commands.len());
            self.actuator.submit(plan.clone())?;
            report.elapsed += self.actuator.run_until_idle(self.time_limit)?;
            self.current = self.actuator.positions()?;
            report.plans.push(plan);
        }
        info!("displayed {} variations in {:.2} s", report.plans.len(), report.elapsed);
        report.final_positions = self.current.clone();
        Ok(report)
    }

    pub fn shutdown(self) -> ControllerState {
        self.actuator.shutdown()
    }
}
