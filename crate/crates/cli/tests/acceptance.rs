//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any fails.

use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use plantchart_core::fixtures::{wednesday, FIXTURES};
use plantchart_core::{
    encode_relative, lowfi_timeline, plan, segment_variations, transition_plan, DeviceProfile, ForecastSeries,
    HourSlot, LeafPosition, MotionPlan, Rate, Rational, LOWFI_STEP_PT, LOWFI_TICK_S,
};
use plantchart_device::protocol::{decode_frame, encode_frame, Frame, FrameError, Opcode};
use plantchart_device::{to_ndjson, ControllerState, EventKind, SimConfig, LEAVES};
use plantchart_render::{
    design_space_gallery, layout, render_frames, AnchorSides, Anchoring, Canvas, ChartDimensions, ChartScene,
    Decoration, FrameSource, Point, Side, GALLERY_STYLES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Encoding table

/// Expected position for ratio `k / 1000`, straight from the bin table.
fn table_bin(k: u32) -> u8 {
    match k {
        0..=100 => 0,
        101..=200 => 3,
        201..=500 => 4,
        501..=800 => 5,
        801..=900 => 6,
        901..=999 => 7,
        _ => 10,
    }
}

fn encoding_table() -> Outcome {
    let mut mismatches = Vec::new();
    let one = Rate::new(1.0).unwrap();
    let exact_one = Rate::new(Rational::from_integer(1)).unwrap();
    for k in 0..=1000u32 {
        let want = table_bin(k);
        let float = encode_relative(Rate::new(f64::from(k) / 1000.0).unwrap(), one).map(|p| p.value());
        let exact = encode_relative(Rate::new(Rational::new(i64::from(k), 1000)).unwrap(), exact_one).map(|p| p.value());
        if float != Ok(want) || exact != Ok(want) {
            mismatches.push(k);
        }
    }
    ensure(mismatches.is_empty(), || format!("mismatched ratios (x1000): {mismatches:?}"))?;
    Ok("1001 ratios, float and exact, 0 mismatches".into())
}

// 2. Fixture anchors

fn fixture_anchors() -> Outcome {
    let mut checked = 0;
    for f in FIXTURES.iter() {
        let series: ForecastSeries = f.series().map_err(|e| format!("{}: {e}", f.name))?;
        let found: Vec<(u8, u8, u8)> = segment_variations(&series)
            .iter()
            .map(|v| (v.start().hour(), v.peak().hour(), v.end().hour()))
            .collect();
        ensure(found == vec![f.anchors()], || format!("{}: expected {:?}, got {found:?}", f.name, f.anchors()))?;
        checked += 1;
    }
    for device in ["plantscreen", "plantform", "cairnscreen", "cairnform"] {
        let day: ForecastSeries = wednesday(device).unwrap().map_err(|e| e.to_string())?;
        let found: Vec<(u8, u8, u8)> = segment_variations(&day)
            .iter()
            .map(|v| (v.start().hour(), v.peak().hour(), v.end().hour()))
            .collect();
        let expected: Vec<(u8, u8, u8)> = (1..=3)
            .map(|i| FIXTURES.iter().find(|f| f.name == format!("{device}-wednesday-{i}")).unwrap().anchors())
            .collect();
        ensure(found == expected, || format!("{device} Wednesday: expected {expected:?}, got {found:?}"))?;
    }
    Ok(format!("{checked} table rows and 4 joined Wednesday days match"))
}

// 3. Segmentation oracle

/// Collapses equal neighbours into runs, cuts at the last sample of every
/// interior run lower than both neighbouring runs, and takes the first
/// maximum of each piece.
fn extrema_scanner(levels: &[u8]) -> Vec<(usize, usize, usize)> {
    let mut runs: Vec<(u8, usize)> = Vec::new();
    for (i, &v) in levels.iter().enumerate() {
        match runs.last_mut() {
            Some((value, last)) if *value == v => *last = i,
            _ => runs.push((v, i)),
        }
    }
    if runs.len() < 2 {
        return Vec::new();
    }
    let mut cuts = vec![0];
    for w in runs.windows(3) {
        if w[1].0 < w[0].0 && w[1].0 < w[2].0 {
            cuts.push(w[1].1);
        }
    }
    cuts.push(levels.len() - 1);
    cuts.windows(2)
        .map(|c| {
            let top = *levels[c[0]..=c[1]].iter().max().unwrap();
            (c[0], (c[0]..=c[1]).find(|&i| levels[i] == top).unwrap(), c[1])
        })
        .collect()
}

fn segmentation_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut flat = 0;
    for _ in 0..100_000 {
        let len = rng.gen_range(3..=10usize);
        let first = rng.gen_range(HourSlot::FIRST..=HourSlot::LAST + 1 - len as u8);
        let levels: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=10)).collect();
        let rates = levels.iter().map(|l| Rate::new(f64::from(*l) / 10.0).unwrap()).collect();
        let series = ForecastSeries::new(HourSlot::new(first).unwrap(), rates).map_err(|e| e.to_string())?;
        let got: Vec<(usize, usize, usize)> = segment_variations(&series)
            .iter()
            .map(|v| {
                let at = |h: HourSlot| usize::from(h.hour() - first);
                (at(v.start()), at(v.peak()), at(v.end()))
            })
            .collect();
        let want = extrema_scanner(&levels);
        flat += usize::from(want.is_empty());
        ensure(got == want, || format!("{levels:?} from {first}: got {got:?}, scanner {want:?}"))?;
    }
    Ok(format!("100000 random series ({flat} flat), 0 mismatches"))
}

// 4. Timing totals

fn timing_totals() -> Outcome {
    let cases = [("plantscreen", 20.0, 16.0), ("plantform", 19.0, 14.0), ("cairnform", 12.0, 8.0), ("cairnscreen", 20.0, 16.0)];
    let mut report = Vec::new();
    for (name, ten, eight) in cases {
        let profile = DeviceProfile::builtin(name).unwrap();
        for (hours, reported) in [(10usize, ten), (8, eight)] {
            let zeros = vec![LeafPosition::ZERO; hours];
            let plan = plan(&vec![LeafPosition::FULL; hours], &zeros, &profile).map_err(|e| e.to_string())?;
            let mut start = vec![LeafPosition::ZERO; LEAVES];
            start[..hours].copy_from_slice(&zeros);
            let mut ctrl = ControllerState::with_positions(&profile, SimConfig::default(), &start).map_err(|e| e.to_string())?;
            ctrl.submit_plan(&plan).map_err(|e| e.to_string())?;
            let simulated = ctrl.run_until_idle(60.0).map_err(|e| e.to_string())?;
            for (what, total) in [("plan", plan.total_duration), ("simulator", simulated)] {
                ensure((total - reported).abs() <= 1.0, || {
                    format!("{name} {hours}h {what} total {total:.3} s, reported {reported} s")
                })?;
            }
            report.push(format!("{name} {hours}h {:.2}s", plan.total_duration));
        }
    }
    Ok(report.join(", "))
}

// 5. Simulator laws

fn random_positions(rng: &mut ChaCha8Rng) -> Vec<LeafPosition> {
    (0..LEAVES).map(|_| LeafPosition::new(rng.gen_range(0..=10)).unwrap()).collect()
}

/// Runs one random plan with an optional power cut and checks every law.
/// Returns the event log.
fn run_random_plan(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let name = DeviceProfile::BUILTIN_NAMES[rng.gen_range(0..4)];
    let profile = DeviceProfile::builtin(name).unwrap().with_random_calibration(rng);
    let (start, target) = (random_positions(rng), random_positions(rng));
    let plan: MotionPlan = if rng.gen_bool(0.5) {
        transition_plan(&start, &target, &profile)
    } else {
        plan(&target, &start, &profile)
    }
    .map_err(|e| e.to_string())?;
    let cut = (rng.gen_range(0..300u32), rng.gen_range(1..100u32));

    let config = SimConfig::default();
    let mut ctrl = ControllerState::with_positions(&profile, config, &start).map_err(|e| e.to_string())?;
    ctrl.submit_plan(&plan).map_err(|e| e.to_string())?;
    let mut ticks = 0u32;
    let steps = |c: &ControllerState| (0..LEAVES).map(|l| c.channel(l).current_step).collect::<Vec<_>>();
    while !ctrl.is_idle() {
        ensure(ticks < 100_000, || format!("{name}: plan did not settle"))?;
        if ticks == cut.0 {
            ctrl.set_relay(false);
        }
        if ticks == cut.0 + cut.1 {
            ctrl.set_relay(true);
        }
        let before = steps(&ctrl);
        ctrl.tick(config.tick);
        ticks += 1;
        if !ctrl.relay_on() {
            ensure(steps(&ctrl) == before, || format!("{name}: motion while unpowered at tick {ticks}"))?;
        }
        for leaf in 0..LEAVES {
            let ch = ctrl.channel(leaf);
            ensure(ch.stop_sensor_active() == (ch.current_step == 0), || format!("leaf {leaf} stop sensor wrong"))?;
        }
    }
    ctrl.power_gate();

    ensure(ctrl.leaf_positions() == plan.end_positions(&start), || format!("{name}: end positions differ from targets"))?;
    for leaf in 0..LEAVES {
        let cmds: Vec<_> = plan.commands.iter().filter(|c| c.leaf == leaf).collect();
        let travel: u64 = cmds
            .iter()
            .map(|c| u64::from(profile.steps_for(leaf, c.from).abs_diff(profile.steps_for(leaf, c.to))))
            .sum();
        let rotations = ctrl.channel(leaf).rotation_count;
        ensure(rotations == travel, || format!("{name} leaf {leaf}: {rotations} rotations, {travel} expected"))?;
        let arrivals = cmds.iter().filter(|c| c.to == LeafPosition::ZERO && c.from != LeafPosition::ZERO).count();
        let fired = ctrl
            .events()
            .iter()
            .filter(|e| e.kind == EventKind::StopSensor && e.detail["leaf"] == leaf)
            .count();
        ensure(fired == arrivals, || format!("{name} leaf {leaf}: {fired} stop events, {arrivals} arrivals at 0"))?;
    }
    ensure(!ctrl.relay_on(), || format!("{name}: relay left on"))?;
    Ok(to_ndjson(ctrl.events()))
}

fn simulator_laws() -> Outcome {
    let batch = |seed: u64| -> Result<String, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut log = String::new();
        for _ in 0..1000 {
            log.push_str(&run_random_plan(&mut rng)?);
        }
        Ok(log)
    };
    let (a, b) = (batch(77)?, batch(77)?);
    ensure(a == b, || "event logs differ between runs with the same seed".into())?;
    Ok(format!("1000 plans with power cuts, laws hold, {} log bytes identical across runs", a.len()))
}

// 6. Protocol round trip

fn protocol_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opcodes = [Opcode::SetTarget, Opcode::Query, Opcode::Event, Opcode::Ack];
    let mut corrupted = 0;
    for i in 0..10_000 {
        let len = match i {
            0 => 0,
            1 => 255,
            _ => rng.gen_range(0..=255),
        };
        let payload: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let frame = Frame::new(rng.gen(), opcodes[rng.gen_range(0..4)], payload).map_err(|e| e.to_string())?;
        let mut bytes = encode_frame(&frame);
        let (back, used) = decode_frame(&bytes).map_err(|e| format!("frame {i}: {e}"))?;
        ensure(back == frame && used == bytes.len(), || format!("frame {i} did not round-trip"))?;

        let last = bytes.len() - 1;
        bytes[last] ^= rng.gen_range(1..=255u8);
        ensure(matches!(decode_frame(&bytes), Err(FrameError::BadChecksum { .. })), || {
            format!("frame {i}: corrupted checksum accepted")
        })?;
        corrupted += 1;
    }
    Ok(format!("10000 frames (0..=255-byte payloads) round-trip, {corrupted} corrupted checksums rejected"))
}

// 7. Scene invariants

fn check_scene(scene: &ChartScene, n: usize) -> Result<(), String> {
    let style = scene.style;
    ensure(scene.labels().len() == n, || format!("{style}: {} labels for {n} hours", scene.labels().len()))?;
    match style.anchoring {
        Anchoring::TwoSided => {
            for (i, a) in scene.anchors.iter().enumerate() {
                let side = |s| scene.glyphs.iter().find(|g| g.anchor == i && g.side == s);
                let (Some(r), Some(l)) = (side(Side::Right), side(Side::Left)) else {
                    return Err(format!("{style}: hour {i} lacks a side"));
                };
                let mirrored = r.outline.len() == l.outline.len()
                    && r.outline.iter().zip(&l.outline).all(|(p, q)| Point::new(2.0 * a.point.x - p.x, p.y).dist(*q) <= 1e-6);
                ensure(mirrored, || format!("{style}: hour {i} not mirror symmetric"))?;
            }
        }
        Anchoring::Alternated => {
            let alternates = scene.glyphs.windows(2).all(|w| w[0].side != w[1].side)
                && scene.anchors.iter().all(|a| a.sides != AnchorSides::Both);
            ensure(alternates, || format!("{style}: sides do not alternate"))?;
        }
        Anchoring::OneSided => {}
    }
    for g in &scene.glyphs {
        for h in &scene.glyphs {
            if g.extent < h.extent {
                ensure(g.measured_extent() < h.measured_extent(), || format!("{style}: extent not monotone"))?;
            }
        }
        if g.decoration == Decoration::Leaf && g.extent == 1.0 {
            let top = scene.anchors[g.anchor].point.y;
            ensure(g.outline.iter().all(|p| p.y <= top + 1e-9), || format!("{style}: unfurled leaf rises above anchor"))?;
        }
    }
    Ok(())
}

fn scene_invariants() -> Outcome {
    let dims = ChartDimensions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut scenes = 0;
    for style in GALLERY_STYLES {
        let ladder: Vec<f64> = (0..=10u8)
            .map(|p| {
                let pos = vec![LeafPosition::new(p).unwrap(); 3];
                layout(&pos, &hours(3), style, &dims).map(|s| s.glyphs[0].measured_extent())
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(ladder.windows(2).all(|w| w[0] < w[1]), || format!("{style}: extents {ladder:?}"))?;
        for _ in 0..100 {
            let n = rng.gen_range(3..=10);
            let pos: Vec<LeafPosition> = (0..n).map(|_| LeafPosition::new(rng.gen_range(0..=10)).unwrap()).collect();
            let scene = layout(&pos, &hours(n), style, &dims).map_err(|e| e.to_string())?;
            check_scene(&scene, n)?;
            scenes += 1;
        }
        let full = layout(&[LeafPosition::FULL; 10], &hours(10), style, &dims).map_err(|e| e.to_string())?;
        check_scene(&full, 10)?;
    }
    Ok(format!("{} styles, {scenes} random scenes", GALLERY_STYLES.len()))
}

fn hours(n: usize) -> Vec<HourSlot> {
    (0..n as u8).map(|i| HourSlot::new(8 + i).unwrap()).collect()
}

// 8. Render determinism

fn render_determinism() -> Outcome {
    let dims = ChartDimensions::default();
    let a = design_space_gallery(&dims, Canvas::default()).map_err(|e| e.to_string())?;
    let b = design_space_gallery(&dims, Canvas::default()).map_err(|e| e.to_string())?;
    ensure(a == b, || "gallery differs between runs".into())?;
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../render/tests/golden");
    for (style, doc) in &a {
        let path = golden.join(format!("{}.svg", style.slug()));
        let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(&expected == doc, || format!("{style} differs from {}", path.display()))?;
    }
    Ok(format!("{} gallery documents byte-equal across runs and to golden files", a.len()))
}

// 9. Low-fi animation

fn lowfi_animation() -> Outcome {
    let t = lowfi_timeline(100.0, LOWFI_STEP_PT, LOWFI_TICK_S);
    ensure(t.len() == 5, || format!("{} frames", t.len()))?;
    let ext: Vec<f64> = t.frames.iter().map(|f| f.extensions[0]).collect();
    ensure(ext == vec![20.0, 40.0, 60.0, 80.0, 100.0], || format!("extensions {ext:?}"))?;
    ensure((t.duration() - 1.6).abs() < 1e-12, || format!("spans {} s", t.duration()))?;
    let src = FrameSource::Timeline { timeline: &t, full_extent_pt: 100.0 };
    let docs = render_frames(src, &hours(3), GALLERY_STYLES[0], &ChartDimensions::default(), Canvas::default())
        .map_err(|e| e.to_string())?;
    ensure(docs.len() == 5, || format!("{} rendered frames", docs.len()))?;
    Ok("100 pt gives 5 frames of 20 pt over 1.6 s".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("encoding table", Duration::from_secs(1), encoding_table),
        ("fixture anchors", Duration::from_secs(1), fixture_anchors),
        ("segmentation oracle", Duration::from_secs(30), segmentation_oracle),
        ("timing totals", Duration::from_secs(5), timing_totals),
        ("simulator laws", Duration::from_secs(60), simulator_laws),
        ("protocol roundtrip", Duration::from_secs(5), protocol_roundtrip),
        ("scene invariants", Duration::from_secs(30), scene_invariants),
        ("render determinism", Duration::from_secs(30), render_determinism),
        ("low-fi animation", Duration::from_secs(1), lowfi_animation),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let took = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *budget => Err(format!("{detail}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
