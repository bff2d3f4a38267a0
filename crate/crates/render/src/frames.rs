use plantchart_core::fixtures::fixture;
use plantchart_core::{
    encode_series, segment_variations, EncodingMode, FrameTimeline, HourSlot, LeafPosition, MotionPlan,
};

use crate::layout::{layout, layout_extents};
use crate::style::{Anchoring, Animation, ChartDimensions, ChartStyle, Decoration, Trunk};
use crate::svg::{render_svg, Canvas};
use crate::RenderError;

/// What to animate.
#[derive(Clone, Copy, Debug)]
pub enum FrameSource<'a> {
    /// A motion plan starting from `start`, sampled `fps` times a second.
    Plan { plan: &'a MotionPlan, start: &'a [LeafPosition], fps: f64 },
    /// Stem extensions in points; `full_extent_pt` maps to extent 1.
    Timeline { timeline: &'a FrameTimeline, full_extent_pt: f64 },
}

impl FrameSource<'_> {
    /// Extent vectors, one per frame, fitted to `count` hours.
    pub fn extents(&self, count: usize) -> Vec<Vec<f64>> {
        let fit = |values: Vec<f64>| -> Vec<f64> {
            (0..count).map(|i| values.get(i).copied().unwrap_or(0.0).clamp(0.0, 1.0)).collect()
        };
        match *self {
            FrameSource::Plan { plan, start, fps } => {
                let frames = if fps > 0.0 { (plan.total_duration * fps - 1e-9).ceil().max(0.0) as usize } else { 0 };
                (1..=frames)
                    .map(|k| {
                        let t = (k as f64 / fps).min(plan.total_duration);
                        fit(plan.positions_at(start, t).into_iter().map(|p| p / 10.0).collect())
                    })
                    .collect()
            }
            FrameSource::Timeline { timeline, full_extent_pt } => timeline
                .frames
                .iter()
                .map(|f| fit(f.extensions.iter().map(|e| e / full_extent_pt).collect()))
                .collect(),
        }
    }
}

/// One document per frame, in order, ready for external GIF assembly.
pub fn render_frames(
    source: FrameSource<'_>,
    hours: &[HourSlot],
    style: ChartStyle,
    dims: &ChartDimensions,
    canvas: Canvas,
) -> Result<Vec<String>, RenderError> {
    source
        .extents(hours.len())
        .iter()
        .map(|e| render_svg(&layout_extents(e, hours, style, dims)?, canvas))
        .collect()
}

use Anchoring::*;
use Animation::*;
use Decoration::*;
use Trunk::*;

/// Styles of the gallery: the six sketches compared first, the bamboo and
/// leaf pair compared next, then the four built displays.
pub const GALLERY_STYLES: [ChartStyle; 11] = [
    ChartStyle::new(Bar, OneSided, Straight, Growth),
    ChartStyle::new(Bar, OneSided, Curvy, Growth),
    ChartStyle::new(Bar, Alternated, Curvy, Growth),
    ChartStyle::new(Leaf, OneSided, Straight, Unfurl),
    ChartStyle::new(Leaf, OneSided, Curvy, Unfurl),
    ChartStyle::new(Leaf, Alternated, Curvy, Unfurl),
    ChartStyle::new(Bamboo, TwoSided, Curvy, Growth),
    ChartStyle::new(Leaf, TwoSided, Curvy, Unfurl),
    ChartStyle::new(Leaf, TwoSided, Straight, Unfurl),
    ChartStyle::new(Bar, TwoSided, Straight, Growth),
    ChartStyle::new(Ring, TwoSided, Straight, Growth),
];

/// Hours and positions every gallery chart shows: a ten-hour day rising
/// from 8:00 to a noon peak.
pub fn gallery_data() -> (Vec<HourSlot>, Vec<LeafPosition>) {
    let series = fixture("plantform-monday")
        .and_then(|f| f.series::<f64>().ok())
        .expect("built-in fixture is valid");
    let variation = segment_variations(&series).into_iter().next().expect("fixture has a variation");
    let positions = encode_series(&series, &variation, EncodingMode::PeakRelative).expect("fixture encodes");
    (series.hours(), positions)
}

pub fn design_space_gallery(
    dims: &ChartDimensions,
    canvas: Canvas,
) -> Result<Vec<(ChartStyle, String)>, RenderError> {
    let (hours, positions) = gallery_data();
    GALLERY_STYLES
        .iter()
        .map(|&style| Ok((style, render_svg(&layout(&positions, &hours, style, dims)?, canvas)?)))
        .collect()
}
