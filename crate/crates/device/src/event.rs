use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    RelayOn,
    RelayOff,
    FrameTx,
    FrameRx,
    FrameLost,
    StopSensor,
    TargetReached,
}

/// One line of the event log. `board` is `None` for the coordinator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub board: Option<u8>,
    pub kind: EventKind,
    pub detail: Value,
}

impl Event {
    pub(crate) fn at_us(t_us: u64, board: Option<u8>, kind: EventKind, detail: Value) -> Self {
        Event { t: t_us as f64 / 1e6, board, kind, detail }
    }
}

/// Writes events as newline-delimited JSON.
pub fn write_ndjson<W: Write>(mut out: W, events: &[Event]) -> io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn to_ndjson(events: &[Event]) -> String {
    let mut buf = Vec::new();
    write_ndjson(&mut buf, events).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}
