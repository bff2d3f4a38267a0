use std::f64::consts::PI;

use plantchart_core::{HourSlot, LeafPosition};
use serde::{Deserialize, Serialize};

use crate::geometry::{bounds, half_ellipse, leaf_centerline, leaf_outline, polyline_length, rectangle, Point, MAX_CURL};
use crate::style::{Anchoring, Animation, ChartDimensions, ChartStyle, Decoration, Trunk};
use crate::RenderError;

const TRUNK_SAMPLES: usize = 120;
const CURVE_PERIODS: f64 = 1.5;
const CURVE_AMPLITUDE: f64 = 0.06;
const TRUNK_OVERHANG: f64 = 0.04;
const LEAF_WIDTH: f64 = 0.25;
const RING_ASPECT: f64 = 0.2;
const BAMBOO_NODE_GAP: f64 = 2.5;
const BAMBOO_LEAFLET: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorSides {
    Left,
    Right,
    Both,
}

impl AnchorSides {
    pub fn sides(self) -> &'static [Side] {
        match self {
            AnchorSides::Left => &[Side::Left],
            AnchorSides::Right => &[Side::Right],
            AnchorSides::Both => &[Side::Left, Side::Right],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub hour: HourSlot,
    pub label: String,
    pub point: Point,
    pub sides: AnchorSides,
    pub label_at: Point,
    /// Label text ends at `label_at` instead of starting there.
    pub label_right_aligned: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Glyph {
    pub anchor: usize,
    pub side: Side,
    pub decoration: Decoration,
    /// Extent parameter in `[0, 1]`.
    pub extent: f64,
    /// Nominal length (or diameter for rings) in centimeters.
    pub size: f64,
    pub origin: Point,
    pub centerline: Vec<Point>,
    /// Closed outline, filled when drawn.
    pub outline: Vec<Point>,
    /// Static strokes such as bamboo nodes and leaflets.
    pub details: Vec<Vec<Point>>,
}

impl Glyph {
    /// Extent measured back from the geometry: arc length for leaves,
    /// length for bars and diameter for rings.
    pub fn measured_extent(&self) -> f64 {
        match self.decoration {
            Decoration::Leaf => polyline_length(&self.centerline),
            Decoration::Bar | Decoration::Bamboo => match (self.centerline.first(), self.centerline.last()) {
                (Some(a), Some(b)) => a.dist(*b),
                _ => 0.0,
            },
            Decoration::Ring => 2.0 * self.centerline.iter().map(|p| (p.x - self.origin.x).abs()).fold(0.0, f64::max),
        }
    }
}

/// Resolved geometry of one chart, in centimeters with y pointing up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartScene {
    pub style: ChartStyle,
    pub dims: ChartDimensions,
    pub trunk: Vec<Point>,
    pub anchors: Vec<Anchor>,
    pub glyphs: Vec<Glyph>,
}

impl ChartScene {
    pub fn labels(&self) -> Vec<&str> {
        self.anchors.iter().map(|a| a.label.as_str()).collect()
    }

    pub fn label_size(&self) -> f64 {
        let spacing = self.dims.chart_height / (self.anchors.len().max(2) - 1) as f64;
        (0.3 * spacing).min(0.04 * self.dims.chart_height)
    }

    /// Region shown when rendering. It covers the largest glyphs the
    /// dimensions allow, so frames of one animation share a framing.
    pub fn view_box(&self) -> (Point, Point) {
        let d = &self.dims;
        let thick = d.thickness_min_extent.max(d.thickness_max_extent);
        let reach = match self.style.decoration {
            Decoration::Ring => d.glyph_max_extent / 2.0 + thick,
            _ => d.glyph_max_extent + thick,
        };
        let amp = if self.style.trunk == Trunk::Curvy { CURVE_AMPLITUDE * d.chart_height } else { 0.0 };
        let half = reach + amp + 3.0 * self.label_size();
        let h = d.chart_height;
        let fixed = [
            Point::new(-half, -TRUNK_OVERHANG * h - 0.6 * reach),
            Point::new(half, (1.0 + TRUNK_OVERHANG) * h + 0.3 * reach),
        ];
        let all = self
            .trunk
            .iter()
            .chain(self.glyphs.iter().flat_map(|g| g.outline.iter().chain(g.details.iter().flatten())))
            .chain(self.anchors.iter().map(|a| &a.label_at))
            .chain(fixed.iter());
        bounds(all).expect("fixed corners are always present")
    }
}

fn trunk_x(trunk: Trunk, y: f64, height: f64) -> f64 {
    match trunk {
        Trunk::Straight => 0.0,
        Trunk::Curvy => CURVE_AMPLITUDE * height * (2.0 * PI * CURVE_PERIODS * y / height).sin(),
    }
}

/// Lays out a chart for discrete leaf positions; extent is `position / 10`.
pub fn layout(
    positions: &[LeafPosition],
    hours: &[HourSlot],
    style: ChartStyle,
    dims: &ChartDimensions,
) -> Result<ChartScene, RenderError> {
    let extents: Vec<f64> = positions.iter().map(|p| p.extent()).collect();
    layout_extents(&extents, hours, style, dims)
}

/// Like [`layout`] but with continuous extents in `[0, 1]`, as needed for
/// in-between animation frames.
pub fn layout_extents(
    extents: &[f64],
    hours: &[HourSlot],
    style: ChartStyle,
    dims: &ChartDimensions,
) -> Result<ChartScene, RenderError> {
    if extents.len() != hours.len() {
        return Err(RenderError::LengthMismatch { positions: extents.len(), hours: hours.len() });
    }
    if !(3..=10).contains(&hours.len()) {
        return Err(RenderError::HourCount(hours.len()));
    }
    if let Some(bad) = extents.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(RenderError::ExtentRange(*bad));
    }
    style.validate()?;
    dims.validate()?;

    let h = dims.chart_height;
    let n = hours.len();
    let spacing = h / (n - 1) as f64;
    let trunk = (0..=TRUNK_SAMPLES)
        .map(|i| {
            let y = h * (-TRUNK_OVERHANG + (1.0 + 2.0 * TRUNK_OVERHANG) * i as f64 / TRUNK_SAMPLES as f64);
            Point::new(trunk_x(style.trunk, y, h), y)
        })
        .collect();

    let mut scene = ChartScene { style, dims: *dims, trunk, anchors: Vec::with_capacity(n), glyphs: Vec::new() };
    let gap = 0.6 * scene.label_size();
    for (i, (hour, &e)) in hours.iter().zip(extents).enumerate() {
        let y = spacing * i as f64;
        let point = Point::new(trunk_x(style.trunk, y, h), y);
        let sides = match style.anchoring {
            Anchoring::OneSided => AnchorSides::Right,
            Anchoring::TwoSided => AnchorSides::Both,
            Anchoring::Alternated if i % 2 == 0 => AnchorSides::Left,
            Anchoring::Alternated => AnchorSides::Right,
        };
        let (label_at, label_right_aligned) = match sides {
            AnchorSides::Right => (point.offset(-gap, 0.0), true),
            AnchorSides::Left => (point.offset(gap, 0.0), false),
            AnchorSides::Both => (point.offset(gap, 0.5 * spacing), false),
        };
        let local = glyph_shape(style, dims, e, spacing);
        for &side in sides.sides() {
            let place = |p: &Point| match side {
                Side::Right => Point::new(point.x + p.x, point.y + p.y),
                Side::Left => Point::new(point.x - p.x, point.y + p.y),
            };
            scene.glyphs.push(Glyph {
                anchor: i,
                side,
                decoration: style.decoration,
                extent: e,
                size: local.size,
                origin: point,
                centerline: local.centerline.iter().map(place).collect(),
                outline: local.outline.iter().map(place).collect(),
                details: local.details.iter().map(|d| d.iter().map(place).collect()).collect(),
            });
        }
        scene.anchors.push(Anchor { hour: *hour, label: hour.label(), point, sides, label_at, label_right_aligned });
    }
    Ok(scene)
}

struct LocalGlyph {
    size: f64,
    centerline: Vec<Point>,
    outline: Vec<Point>,
    details: Vec<Vec<Point>>,
}

/// Right-facing glyph with its base at the origin.
fn glyph_shape(style: ChartStyle, dims: &ChartDimensions, e: f64, spacing: f64) -> LocalGlyph {
    let size = dims.extent_at(e);
    let bar_thickness = dims.thickness_min_extent.max(dims.thickness_max_extent).min(0.6 * spacing);
    match style.decoration {
        Decoration::Leaf => {
            let curl = match style.animation {
                Animation::Unfurl => MAX_CURL * (1.0 - e),
                Animation::Growth => 0.0,
            };
            let centerline = leaf_centerline(size, curl);
            let outline = leaf_outline(&centerline, LEAF_WIDTH * size);
            LocalGlyph { size, centerline, outline, details: Vec::new() }
        }
        Decoration::Bar => LocalGlyph {
            size,
            centerline: vec![Point::new(0.0, 0.0), Point::new(size, 0.0)],
            outline: rectangle(size, bar_thickness),
            details: Vec::new(),
        },
        Decoration::Bamboo => {
            let t = 0.7 * bar_thickness;
            let mut details: Vec<Vec<Point>> = (1..)
                .map(|k| k as f64 * BAMBOO_NODE_GAP)
                .take_while(|x| *x < size - 1e-9)
                .map(|x| vec![Point::new(x, -0.65 * t), Point::new(x, 0.65 * t)])
                .collect();
            // Leaflets keep their size whatever the data.
            let leaflet = leaf_outline(&leaf_centerline(BAMBOO_LEAFLET, 0.0), 0.3 * BAMBOO_LEAFLET);
            let (c, s) = (0.7f64.cos(), 0.7f64.sin());
            details.push(
                leaflet.iter().map(|p| Point::new(0.4 * t + p.x * c - p.y * s, 0.5 * t + p.x * s + p.y * c)).collect(),
            );
            LocalGlyph {
                size,
                centerline: vec![Point::new(0.0, 0.0), Point::new(size, 0.0)],
                outline: rectangle(size, t),
                details,
            }
        }
        Decoration::Ring => {
            let a = size / 2.0;
            let b = RING_ASPECT * a;
            // Keep the hole visible however thick the dimensions say.
            let t = dims.thickness_at(e).min(0.5 * b);
            let mut outline = half_ellipse(a + t / 2.0, b + t / 2.0);
            outline.extend(half_ellipse((a - t / 2.0).max(0.0), (b - t / 2.0).max(0.0)).into_iter().rev());
            LocalGlyph { size, centerline: half_ellipse(a, b), outline, details: Vec::new() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hours(n: u8) -> Vec<HourSlot> {
        (8..8 + n).map(|h| HourSlot::new(h).unwrap()).collect()
    }

    fn pos(v: &[u8]) -> Vec<LeafPosition> {
        v.iter().map(|p| LeafPosition::new(*p).unwrap()).collect()
    }

    #[test]
    fn two_sided_curvy_leaf_counts() {
        let style: ChartStyle = "leaf,two-sided,curvy".parse().unwrap();
        let s = layout(&pos(&[0, 3, 4, 5, 10, 7, 6, 4, 3, 0]), &hours(10), style, &ChartDimensions::default()).unwrap();
        assert_eq!(s.glyphs.len(), 20);
        assert_eq!(s.labels().len(), 10);
        assert_eq!(s.labels()[0], "8:00");
    }

    #[test]
    fn classic_histogram_bars_are_proportional() {
        let dims = ChartDimensions::new(50.0, 0.0, 10.0).unwrap();
        let s = layout(&pos(&[2, 4, 8]), &hours(3), "bar".parse().unwrap(), &dims).unwrap();
        let lengths: Vec<f64> = s.glyphs.iter().map(Glyph::measured_extent).collect();
        assert_eq!(lengths, vec![2.0, 4.0, 8.0]);
    }

    #[test]
    fn alternated_sides_start_left() {
        let s = layout(&pos(&[5; 10]), &hours(10), "bar,alt".parse().unwrap(), &ChartDimensions::default()).unwrap();
        let sides: Vec<Side> = s.glyphs.iter().map(|g| g.side).collect();
        for (i, side) in sides.iter().enumerate() {
            assert_eq!(*side, if i % 2 == 0 { Side::Left } else { Side::Right });
        }
    }

    #[test]
    fn anchors_rise_evenly() {
        let s = layout(&pos(&[1, 2, 3, 4]), &hours(4), "leaf".parse().unwrap(), &ChartDimensions::default()).unwrap();
        let ys: Vec<f64> = s.anchors.iter().map(|a| a.point.y).collect();
        assert_eq!(ys, vec![0.0, 23.0, 46.0, 69.0]);
    }

    #[test]
    fn bad_inputs() {
        let d = ChartDimensions::default();
        let leaf: ChartStyle = "leaf".parse().unwrap();
        assert!(matches!(layout(&pos(&[1, 2]), &hours(3), leaf, &d), Err(RenderError::LengthMismatch { .. })));
        assert!(matches!(layout(&pos(&[1, 2]), &hours(2), leaf, &d), Err(RenderError::HourCount(2))));
        let ring_one = ChartStyle { anchoring: Anchoring::OneSided, ..leaf };
        let ring_one = ChartStyle { decoration: Decoration::Ring, animation: Animation::Growth, ..ring_one };
        assert!(matches!(layout(&pos(&[1, 2, 3]), &hours(3), ring_one, &d), Err(RenderError::Unsupported(_))));
    }

    #[test]
    fn plantform_leaf_lengths_span_the_table() {
        let s = layout(&pos(&[0, 5, 10]), &hours(3), "leaf".parse().unwrap(), &ChartDimensions::plantform()).unwrap();
        let ext: Vec<f64> = s.glyphs.iter().map(Glyph::measured_extent).collect();
        assert!((ext[0] - 6.5).abs() < 0.02, "{ext:?}");
        assert!((ext[2] - 13.7).abs() < 1e-9, "{ext:?}");
    }
}
