use std::fs;
use std::io::Write;
use std::path::Path;

use plantchart_core::{
    encode_absolute, encode_series, encode_six_step, plan as plan_motion, segment_variations, slope_ranges,
    storage_advice, DeviceProfile, EncodeError, EncodingMode, LeafPosition, MotionPlan, Series, Variation,
};
use plantchart_device::{write_ndjson, ControllerState, DisplayService, SimConfig};
use plantchart_render::{
    design_space_gallery, layout, render_frames, render_svg, ChartStyle, FrameSource,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{default_mode, parse_canvas, parse_dims, parse_mode, parse_positions, resolve_profile, resolve_series};
use crate::EncodeArgs;

fn print_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub(crate) fn variation_json(v: &Variation) -> Value {
    json!({
        "start": v.start(),
        "peak": v.peak(),
        "end": v.end(),
        "start_label": v.start().label(),
        "peak_label": v.peak().label(),
        "end_label": v.end().end_label(),
        "slopes": slope_ranges(v),
        "storage_advice": storage_advice(v),
    })
}

pub fn segment(input: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let series = resolve_series(input)?;
    let variations: Vec<Value> = segment_variations(&series).iter().map(variation_json).collect();
    print_json(
        out,
        &json!({
            "hours": series.hours(),
            "rates": series.rates().iter().map(|r| r.value()).collect::<Vec<_>>(),
            "variations": variations,
        }),
    )
}

fn pick_variation(series: &Series, index: usize) -> Result<Option<Variation>, CliError> {
    let mut all = segment_variations(series);
    if all.is_empty() {
        return Ok(None);
    }
    if index >= all.len() {
        return Err(CliError::input(format!("variation index {index} out of range ({} variations)", all.len())));
    }
    Ok(Some(all.swap_remove(index)))
}

/// Positions per hour of `series`. A flat series has no variation; it can
/// still be shown in the modes that do not divide by the peak.
fn positions_for(
    series: &Series,
    variation: Option<&Variation>,
    mode: EncodingMode,
) -> Result<Vec<LeafPosition>, CliError> {
    match (variation, mode) {
        (Some(v), _) => Ok(encode_series(series, v, mode)?),
        (None, EncodingMode::PeakRelative) => Err(EncodeError::FlatVariation.into()),
        (None, EncodingMode::AbsoluteLinear) => Ok(series.rates().iter().map(|r| encode_absolute(*r)).collect()),
        (None, EncodingMode::SixStep) => Ok(series
            .rates()
            .iter()
            .map(|r| LeafPosition::new(2 * encode_six_step(*r)).expect("six steps fit"))
            .collect()),
    }
}

fn encoded(args: &EncodeArgs, fallback: EncodingMode) -> Result<(Series, Option<Variation>, EncodingMode, Vec<LeafPosition>), CliError> {
    let series = resolve_series(&args.input)?;
    let mode = args.mode.as_deref().map(parse_mode).transpose()?.unwrap_or(fallback);
    let variation = pick_variation(&series, args.variation_index)?;
    let positions = positions_for(&series, variation.as_ref(), mode)?;
    Ok((series, variation, mode, positions))
}

pub fn encode(args: &EncodeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (series, variation, mode, positions) = encoded(args, EncodingMode::PeakRelative)?;
    let rows: Vec<Value> = series
        .samples()
        .iter()
        .zip(&positions)
        .map(|((hour, rate), pos)| json!({ "hour": hour, "rate": rate.value(), "position": pos }))
        .collect();
    print_json(
        out,
        &json!({
            "mode": mode.name(),
            "variation": variation.as_ref().map(variation_json),
            "positions": rows,
        }),
    )
}

pub fn plan(
    args: &EncodeArgs,
    profile: &str,
    from: Option<&str>,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let profile = resolve_profile(profile)?;
    let (_, _, _, targets) = encoded(args, default_mode(&profile))?;
    let current = match from {
        Some(s) => parse_positions(s)?,
        None => vec![LeafPosition::ZERO; targets.len()],
    };
    let plan = plan_motion(&targets, &current, &profile)?;
    let text = plan.to_json();
    match path {
        Some(p) => fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

pub struct SimulateOptions<'a> {
    pub input: Option<&'a str>,
    pub plan: Option<&'a Path>,
    pub profile: &'a str,
    pub mode: Option<&'a str>,
    pub seed: Option<u64>,
    pub tick: f64,
    pub log: Option<&'a Path>,
}

pub fn simulate(opts: SimulateOptions<'_>, out: &mut dyn Write) -> Result<(), CliError> {
    if !(opts.tick.is_finite() && opts.tick > 0.0) {
        return Err(CliError::input(format!("tick must be positive, got {}", opts.tick)));
    }
    let config = SimConfig { tick: opts.tick };
    let calibrate = |p: DeviceProfile| match opts.seed {
        Some(seed) => p.with_random_calibration(&mut ChaCha8Rng::seed_from_u64(seed)),
        None => p,
    };
    let (events, summary) = if let Some(path) = opts.plan {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let plan = MotionPlan::from_json(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let profile = calibrate(plan.profile.clone());
        let mut ctrl = ControllerState::new(&profile, config)?;
        ctrl.submit_plan(&plan)?;
        let elapsed = ctrl.run_until_idle(plan.total_duration + 60.0)?;
        let summary = json!({
            "profile": profile.name,
            "plans": 1,
            "planned": plan.total_duration,
            "elapsed": elapsed,
            "final_positions": ctrl.leaf_positions(),
        });
        (ctrl.events().to_vec(), summary)
    } else {
        let input = opts.input.ok_or_else(|| CliError::input("simulate needs an input or --plan"))?;
        let series = resolve_series(input)?;
        let profile = calibrate(resolve_profile(opts.profile)?);
        let mode = opts.mode.map(parse_mode).transpose()?.unwrap_or_else(|| default_mode(&profile));
        let ctrl = ControllerState::new(&profile, config)?;
        let mut service = DisplayService::new(ctrl, profile.clone(), mode);
        let report = service.display(&series)?;
        let events = service.drain_events();
        service.shutdown();
        let summary = json!({
            "profile": profile.name,
            "mode": mode.name(),
            "plans": report.plans.len(),
            "planned": report.plans.iter().map(|p| p.total_duration).sum::<f64>(),
            "elapsed": report.elapsed,
            "final_positions": report.final_positions,
        });
        (events, summary)
    };
    match opts.log {
        Some(path) => {
            write_ndjson(fs::File::create(path)?, &events)?;
            print_json(out, &summary)
        }
        None => Ok(write_ndjson(out, &events)?),
    }
}

pub struct RenderOptions<'a> {
    pub input: Option<&'a str>,
    pub style: &'a str,
    pub dims: &'a str,
    pub canvas: &'a str,
    pub mode: Option<&'a str>,
    pub variation_index: usize,
    pub frames: bool,
    pub fps: f64,
    pub profile: &'a str,
    pub gallery: bool,
    pub out: Option<&'a Path>,
}

pub fn render(opts: RenderOptions<'_>, out: &mut dyn Write) -> Result<(), CliError> {
    let dims = parse_dims(opts.dims)?;
    let canvas = parse_canvas(opts.canvas)?;
    let out_dir = |what: &str| -> Result<&Path, CliError> {
        let dir = opts.out.ok_or_else(|| CliError::input(format!("{what} needs --out DIR")))?;
        fs::create_dir_all(dir)?;
        Ok(dir)
    };

    if opts.gallery {
        let dir = out_dir("--gallery")?;
        let mut files = Vec::new();
        for (style, doc) in design_space_gallery(&dims, canvas)? {
            let path = dir.join(format!("{}.svg", style.slug()));
            fs::write(&path, doc)?;
            files.push(json!({ "style": style.to_string(), "file": path }));
        }
        return print_json(out, &json!({ "files": files }));
    }

    let style: ChartStyle = opts.style.parse()?;
    let input = opts.input.ok_or_else(|| CliError::input("render needs an input or --gallery"))?;
    let args = EncodeArgs { input: input.to_string(), mode: opts.mode.map(str::to_string), variation_index: opts.variation_index };
    let (series, _, _, targets) = encoded(&args, EncodingMode::PeakRelative)?;
    let hours = series.hours();

    if opts.frames {
        if !(opts.fps.is_finite() && opts.fps > 0.0) {
            return Err(CliError::input(format!("fps must be positive, got {}", opts.fps)));
        }
        let profile = resolve_profile(opts.profile)?;
        let zeros = vec![LeafPosition::ZERO; targets.len()];
        let plan = plan_motion(&targets, &zeros, &profile)?;
        let docs = render_frames(FrameSource::Plan { plan: &plan, start: &zeros, fps: opts.fps }, &hours, style, &dims, canvas)?;
        let dir = out_dir("--frames")?;
        let width = docs.len().to_string().len().max(4);
        for (i, doc) in docs.iter().enumerate() {
            fs::write(dir.join(format!("frame_{:0width$}.svg", i + 1)), doc)?;
        }
        return print_json(out, &json!({ "frames": docs.len(), "dir": dir, "duration": plan.total_duration }));
    }

    let doc = render_svg(&layout(&targets, &hours, style, &dims)?, canvas)?;
    match opts.out {
        Some(path) => fs::write(path, doc)?,
        None => out.write_all(doc.as_bytes())?,
    }
    Ok(())
}
