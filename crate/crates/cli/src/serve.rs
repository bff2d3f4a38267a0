use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::mpsc::{self, Receiver, Sender};
use std::thread;
use std::time::Duration;

use clap::{ArgGroup, Args};
use log::{info, warn};
use plantchart_core::{load_series, segment_variations};
use plantchart_device::{write_ndjson, ControllerState, DisplayService, SimConfig};
use rumqttc::{Client, Event, MqttOptions, Packet, QoS};
use serde_json::{json, Value};

use crate::commands::variation_json;
use crate::error::CliError;
use crate::input::{default_mode, parse_mode, resolve_profile};

pub const DEFAULT_TOPIC: &str = "plantform/forecast";

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["listen", "file", "topic"])))]
pub struct ServeArgs {
    /// Accept newline-delimited forecasts on this TCP address.
    #[arg(long)]
    pub listen: Option<String>,
    /// Replay newline-delimited forecasts from a file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Subscribe to forecasts on this MQTT topic.
    #[arg(long, num_args = 0..=1, default_missing_value = DEFAULT_TOPIC)]
    pub topic: Option<String>,
    #[arg(long, default_value = "127.0.0.1:1883")]
    pub broker: String,
    #[arg(long, default_value = "plantform")]
    pub profile: String,
    #[arg(long)]
    pub mode: Option<String>,
    /// Append the device event log here as NDJSON.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Stop after this many forecast payloads.
    #[arg(long)]
    pub max_payloads: Option<usize>,
    /// Consecutive connection failures tolerated before giving up.
    #[arg(long, default_value_t = 5)]
    pub max_retries: u32,
    #[arg(long, default_value_t = 200)]
    pub backoff_ms: u64,
    #[arg(long, default_value_t = 5000)]
    pub backoff_max_ms: u64,
    #[arg(long, default_value_t = 0.01)]
    pub tick: f64,
}

/// Where an answer goes: the command's stdout, or back down the socket the
/// request came from. Socket answers are written by the processing loop
/// itself so none is lost when serving stops.
enum Reply {
    Out,
    Socket(TcpStream),
}

enum Feed {
    Payload { text: String, reply: Reply },
    Query(TcpStream),
    Failed(String),
    Shutdown,
}

/// Exponential backoff doubling from `base` up to `cap`.
#[derive(Clone, Copy, Debug)]
pub struct Backoff {
    pub base: Duration,
    pub cap: Duration,
}

impl Backoff {
    /// Delay before retry number `attempt` (1-based).
    pub fn delay(&self, attempt: u32) -> Duration {
        let factor = 1u32.checked_shl(attempt.saturating_sub(1)).unwrap_or(u32::MAX);
        self.base.saturating_mul(factor).min(self.cap)
    }
}

struct Processor {
    service: DisplayService,
    log: Option<BufWriter<File>>,
    payloads: usize,
    accepted: usize,
    logged: usize,
}

impl Processor {
    fn handle(&mut self, text: &str) -> Value {
        self.payloads += 1;
        let series = match load_series::<f64>(text) {
            Ok(s) => s,
            Err(e) => return json!({ "ok": false, "error": e.to_string() }),
        };
        let result = self.service.display(&series);
        let events = self.service.drain_events();
        self.logged += events.len();
        if let Some(log) = self.log.as_mut() {
            if let Err(e) = write_ndjson(&mut *log, &events) {
                warn!("event log write failed: {e}");
            }
        }
        match result {
            Ok(report) => {
                self.accepted += 1;
                let variations: Vec<Value> = segment_variations(&series).iter().map(variation_json).collect();
                json!({
                    "ok": true,
                    "variations": variations,
                    "elapsed": report.elapsed,
                    "positions": report.final_positions,
                })
            }
            Err(e) => json!({ "ok": false, "error": e.to_string() }),
        }
    }

    fn state(&self) -> Value {
        json!({
            "positions": self.service.positions(),
            "payloads": self.payloads,
            "accepted": self.accepted,
            "events": self.logged,
        })
    }
}

fn is_query(text: &str) -> bool {
    serde_json::from_str::<Value>(text).is_ok_and(|v| v.get("query").is_some())
}

pub fn serve(args: &ServeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let profile = resolve_profile(&args.profile)?;
    let mode = args.mode.as_deref().map(parse_mode).transpose()?.unwrap_or_else(|| default_mode(&profile));
    let log = match &args.log {
        Some(p) => Some(BufWriter::new(OpenOptions::new().create(true).append(true).open(p)?)),
        None => None,
    };
    let ctrl = ControllerState::new(&profile, SimConfig { tick: args.tick })?;
    let mut proc = Processor {
        service: DisplayService::new(ctrl, profile, mode),
        log,
        payloads: 0,
        accepted: 0,
        logged: 0,
    };

    let (tx, rx) = mpsc::channel();
    let on_signal = tx.clone();
    // Only the first handler per process is installed; later runs share it.
    let _ = ctrlc::set_handler(move || {
        let _ = on_signal.send(Feed::Shutdown);
    });

    if let Some(addr) = &args.listen {
        let listener = TcpListener::bind(addr).map_err(|e| CliError::input(format!("cannot listen on {addr}: {e}")))?;
        let local = listener.local_addr()?;
        writeln!(out, "{}", json!({ "listening": local.to_string() }))?;
        out.flush()?;
        let tx = tx.clone();
        thread::spawn(move || accept_loop(listener, tx));
    } else if let Some(path) = &args.file {
        let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let tx = tx.clone();
        thread::spawn(move || file_feed(file, tx));
    } else if let Some(topic) = &args.topic {
        let (host, port) = parse_broker(&args.broker)?;
        let backoff =
            Backoff { base: Duration::from_millis(args.backoff_ms), cap: Duration::from_millis(args.backoff_max_ms) };
        let (tx, topic, retries) = (tx.clone(), topic.clone(), args.max_retries);
        thread::spawn(move || mqtt_feed(&topic, host, port, retries, backoff, tx));
    }
    drop(tx);

    let outcome = process(&mut proc, &rx, args.max_payloads, out);
    if let Some(log) = proc.log.as_mut() {
        log.flush()?;
    }
    let summary = proc.state();
    proc.service.shutdown();
    outcome?;
    writeln!(out, "{}", json!({ "summary": summary }))?;
    Ok(())
}

fn process(
    proc: &mut Processor,
    rx: &Receiver<Feed>,
    max_payloads: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if max_payloads == Some(0) {
        return Ok(());
    }
    for feed in rx {
        match feed {
            Feed::Payload { text, reply } => {
                let result = proc.handle(&text).to_string();
                match reply {
                    Reply::Socket(mut s) => answer(&mut s, &result),
                    Reply::Out => {
                        writeln!(out, "{result}")?;
                        out.flush()?;
                    }
                }
                if let Some(log) = proc.log.as_mut() {
                    log.flush()?;
                }
                if max_payloads.is_some_and(|m| proc.payloads >= m) {
                    break;
                }
            }
            Feed::Query(mut s) => answer(&mut s, &proc.state().to_string()),
            Feed::Failed(msg) => return Err(CliError::Input(msg)),
            Feed::Shutdown => break,
        }
    }
    Ok(())
}

fn file_feed(file: File, tx: Sender<Feed>) {
    for line in BufReader::new(file).lines() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        if tx.send(Feed::Payload { text: line, reply: Reply::Out }).is_err() {
            return;
        }
    }
    let _ = tx.send(Feed::Shutdown);
}

fn accept_loop(listener: TcpListener, tx: Sender<Feed>) {
    for stream in listener.incoming() {
        match stream {
            Ok(s) => {
                let tx = tx.clone();
                thread::spawn(move || connection(s, tx));
            }
            Err(e) => warn!("accept failed: {e}"),
        }
    }
}

fn answer(stream: &mut TcpStream, line: &str) {
    if let Err(e) = writeln!(stream, "{line}").and_then(|_| stream.flush()) {
        warn!("client went away: {e}");
    }
}

fn connection(stream: TcpStream, tx: Sender<Feed>) {
    let reader = match stream.try_clone() {
        Ok(r) => BufReader::new(r),
        Err(_) => return,
    };
    for line in reader.lines() {
        let Ok(line) = line else { return };
        if line.trim().is_empty() {
            continue;
        }
        let Ok(back) = stream.try_clone() else { return };
        let feed = if is_query(&line) { Feed::Query(back) } else { Feed::Payload { text: line, reply: Reply::Socket(back) } };
        if tx.send(feed).is_err() {
            return;
        }
    }
}

fn parse_broker(broker: &str) -> Result<(String, u16), CliError> {
    let bad = || CliError::input(format!("broker must be HOST:PORT, got '{broker}'"));
    let (host, port) = broker.rsplit_once(':').ok_or_else(bad)?;
    Ok((host.to_string(), port.parse().map_err(|_| bad())?))
}

fn mqtt_feed(topic: &str, host: String, port: u16, max_retries: u32, backoff: Backoff, tx: Sender<Feed>) {
    let mut options = MqttOptions::new(format!("plantchart-{}", std::process::id()), host, port);
    options.set_keep_alive(Duration::from_secs(30));
    let (client, mut connection) = Client::new(options, 16);
    let mut failures = 0u32;
    for notification in connection.iter() {
        match notification {
            Ok(Event::Incoming(Packet::ConnAck(_))) => {
                failures = 0;
                info!("connected; subscribing to {topic}");
                if let Err(e) = client.try_subscribe(topic, QoS::AtLeastOnce) {
                    warn!("subscribe failed: {e}");
                }
            }
            Ok(Event::Incoming(Packet::Publish(p))) => {
                let text = String::from_utf8_lossy(&p.payload).into_owned();
                if tx.send(Feed::Payload { text, reply: Reply::Out }).is_err() {
                    return;
                }
            }
            Ok(_) => {}
            Err(e) => {
                failures += 1;
                if failures > max_retries {
                    let _ = tx.send(Feed::Failed(format!("broker unreachable after {max_retries} retries: {e}")));
                    return;
                }
                let wait = backoff.delay(failures);
                warn!("connection lost ({e}); retry {failures}/{max_retries} in {wait:?}");
                thread::sleep(wait);
            }
        }
    }
}
