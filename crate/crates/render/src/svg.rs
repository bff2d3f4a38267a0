use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::layout::ChartScene;
use crate::RenderError;

pub const LEAF_GREEN: &str = "#3f9b3f";
const LEAF_EDGE: &str = "#23622a";
const TRUNK_BROWN: &str = "#6b4a2b";
const LABEL_GREY: &str = "#333333";

/// Output size in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: u32,
    pub height: u32,
}

impl Canvas {
    pub const fn new(width: u32, height: u32) -> Self {
        Canvas { width, height }
    }
}

impl Default for Canvas {
    fn default() -> Self {
        Canvas::new(480, 800)
    }
}

/// Fixed three-decimal formatting; negative zero prints as zero.
pub fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

struct Fit {
    scale: f64,
    lo: Point,
    ox: f64,
    oy: f64,
    height: f64,
}

impl Fit {
    fn new(scene: &ChartScene, canvas: Canvas) -> Self {
        let (w, h) = (f64::from(canvas.width), f64::from(canvas.height));
        let margin = 0.02 * w.min(h);
        let (lo, hi) = scene.view_box();
        let (bw, bh) = ((hi.x - lo.x).max(1e-9), (hi.y - lo.y).max(1e-9));
        let scale = ((w - 2.0 * margin) / bw).min((h - 2.0 * margin) / bh);
        Fit {
            scale,
            lo,
            ox: margin + (w - 2.0 * margin - bw * scale) / 2.0,
            oy: margin + (h - 2.0 * margin - bh * scale) / 2.0,
            height: h,
        }
    }

    fn x(&self, x: f64) -> String {
        num(self.ox + (x - self.lo.x) * self.scale)
    }

    fn y(&self, y: f64) -> String {
        num(self.height - (self.oy + (y - self.lo.y) * self.scale))
    }

    fn path(&self, points: &[Point], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{}{} {} ", cmd, self.x(p.x), self.y(p.y));
        }
        if closed {
            d.push('Z');
        }
        d.trim_end().to_string()
    }
}

/// Serializes a scene as a standalone SVG 1.1 document, scaled to fit the
/// canvas. Output is byte-stable for equal inputs.
pub fn render_svg(scene: &ChartScene, canvas: Canvas) -> Result<String, RenderError> {
    if canvas.width == 0 || canvas.height == 0 {
        return Err(RenderError::ZeroCanvas);
    }
    let fit = Fit::new(scene, canvas);
    let px = |cm: f64| num(cm * fit.scale);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = canvas.width,
        h = canvas.height
    );
    let _ = writeln!(out, "<title>{}</title>", scene.style);
    let _ = writeln!(
        out,
        r#"<path class="trunk" d="{}" fill="none" stroke="{TRUNK_BROWN}" stroke-width="{}" stroke-linecap="round"/>"#,
        fit.path(&scene.trunk, false),
        px(0.012 * scene.dims.chart_height)
    );
    for g in &scene.glyphs {
        let hour = scene.anchors[g.anchor].hour.hour();
        let _ = writeln!(
            out,
            r#"<path class="glyph {}" data-hour="{hour}" data-side="{}" data-extent="{}" d="{}" fill="{LEAF_GREEN}" stroke="{LEAF_EDGE}" stroke-width="{}" stroke-linejoin="round"/>"#,
            g.decoration.name(),
            g.side.name(),
            num(g.extent),
            fit.path(&g.outline, true),
            px(0.08)
        );
        for d in &g.details {
            let _ = writeln!(
                out,
                r#"<path class="detail" d="{}" fill="{LEAF_GREEN}" stroke="{LEAF_EDGE}" stroke-width="{}"/>"#,
                fit.path(d, d.len() > 2),
                px(0.08)
            );
        }
    }
    let font = px(scene.label_size());
    for a in &scene.anchors {
        let align = if a.label_right_aligned { "end" } else { "start" };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{font}" text-anchor="{align}" dominant-baseline="middle" fill="{LABEL_GREY}">{}</text>"#,
            fit.x(a.label_at.x),
            fit.y(a.label_at.y),
            a.label
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
