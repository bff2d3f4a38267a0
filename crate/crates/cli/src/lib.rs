//! The `plantchart` command line: forecast series in; variation reports,
//! leaf positions, motion plans, device event logs and SVG charts out.

mod commands;
mod error;
mod input;
mod serve;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, EXIT_ENCODING, EXIT_INPUT, EXIT_OK, EXIT_SIMULATION};
pub use input::{resolve_profile, resolve_series, PROFILE_DIR_VAR};

#[derive(Debug, Parser)]
#[command(name = "plantchart", version, about = "Plant-like charts for renewable energy forecasts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Forecast file (JSON or CSV), `-` for stdin, or a fixture name.
    pub input: String,
    /// relative, absolute or six-step. Defaults to the profile's mode.
    #[arg(long)]
    pub mode: Option<String>,
    /// Which variation of the series to show.
    #[arg(long, default_value_t = 0)]
    pub variation_index: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a series into energy variations.
    Segment {
        input: String,
    },
    /// Encode one variation to leaf positions.
    Encode {
        #[command(flatten)]
        args: EncodeArgs,
    },
    /// Plan the motion that displays one variation.
    Plan {
        #[command(flatten)]
        args: EncodeArgs,
        #[arg(long, default_value = "plantform")]
        profile: String,
        /// Starting positions, comma separated; all zero by default.
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every variation of a series (or a saved plan) on the simulated
    /// device and write its event log as NDJSON.
    Simulate {
        /// Forecast input; omit when using --plan.
        input: Option<String>,
        #[arg(long, conflicts_with = "input")]
        plan: Option<PathBuf>,
        #[arg(long, default_value = "plantform")]
        profile: String,
        #[arg(long)]
        mode: Option<String>,
        /// Draw leaf calibrations at random from this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Simulation step in seconds.
        #[arg(long, default_value_t = 0.01)]
        tick: f64,
        /// Event log destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a chart as SVG, an animation as numbered SVG frames, or the
    /// whole style gallery.
    Render {
        input: Option<String>,
        /// Comma-separated style axes, e.g. leaf,two-sided,curvy.
        #[arg(long, default_value = "leaf,two-sided,straight")]
        style: String,
        /// Preset (plantform, plantscreen, cairnform, cairnscreen) or
        /// height,min,max in centimeters.
        #[arg(long, default_value = "plantform")]
        dims: String,
        #[arg(long, default_value = "480x800")]
        canvas: String,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value_t = 0)]
        variation_index: usize,
        /// Animate from all-zero and write one file per frame.
        #[arg(long)]
        frames: bool,
        #[arg(long, default_value_t = 4.0)]
        fps: f64,
        /// Motion profile timing the animation.
        #[arg(long, default_value = "plantscreen")]
        profile: String,
        /// Write every gallery style.
        #[arg(long, conflicts_with = "input")]
        gallery: bool,
        /// Output file, or directory for --frames and --gallery.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Display forecasts as they arrive from a socket, a file or MQTT.
    Serve(serve::ServeArgs),
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) | Err(CliError::ClosedOutput) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Segment { input } => commands::segment(&input, out),
        Command::Encode { args } => commands::encode(&args, out),
        Command::Plan { args, profile, from, out: path } => {
            commands::plan(&args, &profile, from.as_deref(), path.as_deref(), out)
        }
        Command::Simulate { input, plan, profile, mode, seed, tick, out: path } => commands::simulate(
            commands::SimulateOptions {
                input: input.as_deref(),
                plan: plan.as_deref(),
                profile: &profile,
                mode: mode.as_deref(),
                seed,
                tick,
                log: path.as_deref(),
            },
            out,
        ),
        Command::Render {
            input,
            style,
            dims,
            canvas,
            mode,
            variation_index,
            frames,
            fps,
            profile,
            gallery,
            out: path,
        } => commands::render(
            commands::RenderOptions {
                input: input.as_deref(),
                style: &style,
                dims: &dims,
                canvas: &canvas,
                mode: mode.as_deref(),
                variation_index,
                frames,
                fps,
                profile: &profile,
                gallery,
                out: path.as_deref(),
            },
            out,
        ),
        Command::Serve(args) => serve::serve(&args, out),
    }
}
