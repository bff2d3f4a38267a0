use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn offset(self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Axis-aligned bounds as `(min, max)`, or `None` for no points.
pub fn bounds<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<(Point, Point)> {
    points.into_iter().fold(None, |acc, p| {
        Some(match acc {
            None => (*p, *p),
            Some((lo, hi)) => (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
        })
    })
}

pub(crate) const CURVE_SAMPLES: usize = 160;
/// Curl of a fully furled leaf, in radians.
pub const MAX_CURL: f64 = 3.0 * PI;

/// Arc length of the Archimedean spiral `r = u` over `u` in `[0, theta]`.
fn spiral_arc(theta: f64) -> f64 {
    0.5 * (theta * (1.0 + theta * theta).sqrt() + theta.asinh())
}

/// Centerline of a leaf of arc length `length` curled by `curl` radians,
/// starting at the origin heading along +x and curling clockwise (downward).
/// With no curl the leaf is the straight segment along +x.
pub fn leaf_centerline(length: f64, curl: f64) -> Vec<Point> {
    let n = CURVE_SAMPLES;
    if curl <= 1e-9 {
        return (0..=n).map(|i| Point::new(length * i as f64 / n as f64, 0.0)).collect();
    }
    let b = length / spiral_arc(curl);
    let raw = |u: f64| Point::new(b * u * u.cos(), b * u * u.sin());
    let base = raw(curl);
    // Heading from base toward the spiral center.
    let (hx, hy) = (-(curl.cos() - curl * curl.sin()), -(curl.sin() + curl * curl.cos()));
    let rot = -hy.atan2(hx);
    let (c, s) = (rot.cos(), rot.sin());
    (0..=n)
        .map(|i| {
            let u = curl * (1.0 - i as f64 / n as f64);
            let p = raw(u);
            let (dx, dy) = (p.x - base.x, p.y - base.y);
            Point::new(dx * c - dy * s, dx * s + dy * c)
        })
        .collect()
}

/// Closed leaf outline: the centerline as the upper edge, returning along a
/// lower edge offset to the right of travel by a width that tapers to zero
/// at both ends.
pub fn leaf_outline(centerline: &[Point], max_width: f64) -> Vec<Point> {
    let n = centerline.len();
    let total = polyline_length(centerline);
    let mut lower = Vec::with_capacity(n);
    let mut s = 0.0;
    for i in 0..n {
        if i > 0 {
            s += centerline[i].dist(centerline[i - 1]);
        }
        let (a, b) = (centerline[i.saturating_sub(1)], centerline[(i + 1).min(n - 1)]);
        let len = a.dist(b);
        let (tx, ty) = if len > 0.0 { ((b.x - a.x) / len, (b.y - a.y) / len) } else { (1.0, 0.0) };
        let w = if total > 0.0 { max_width * (PI * s / total).sin().max(0.0) } else { 0.0 };
        lower.push(Point::new(centerline[i].x + ty * w, centerline[i].y - tx * w));
    }
    let mut out = centerline.to_vec();
    out.extend(lower.into_iter().rev().skip(1).take(n.saturating_sub(2)));
    out
}

pub fn rectangle(length: f64, thickness: f64) -> Vec<Point> {
    let h = thickness / 2.0;
    vec![Point::new(0.0, -h), Point::new(length, -h), Point::new(length, h), Point::new(0.0, h)]
}

/// Right half of an ellipse from top to bottom.
pub fn half_ellipse(a: f64, b: f64) -> Vec<Point> {
    let n = CURVE_SAMPLES / 2;
    (0..=n)
        .map(|i| {
            let t = PI / 2.0 - PI * i as f64 / n as f64;
            Point::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_leaf_is_flat_and_exact() {
        let c = leaf_centerline(13.7, 0.0);
        assert!(c.iter().all(|p| p.y == 0.0));
        assert!((polyline_length(&c) - 13.7).abs() < 1e-9);
    }

    #[test]
    fn curled_leaf_keeps_its_length() {
        for curl in [0.1, 1.0, PI, MAX_CURL] {
            let c = leaf_centerline(6.5, curl);
            let len = polyline_length(&c);
            assert!((len - 6.5).abs() < 0.01, "curl {curl}: {len}");
            assert_eq!(c[0], Point::new(0.0, 0.0));
        }
    }

    #[test]
    fn curl_starts_rightward_then_turns_down() {
        let c = leaf_centerline(10.0, 1.0);
        assert!(c[1].x > 0.0 && c[1].y.abs() < 0.01);
        assert!(c.last().unwrap().y < 0.0);
    }

    #[test]
    fn outline_lower_edge_hangs_below_flat_leaf() {
        let c = leaf_centerline(10.0, 0.0);
        let o = leaf_outline(&c, 2.0);
        assert!(o.iter().all(|p| p.y <= 0.0));
        assert!(o.iter().any(|p| p.y < -1.9));
    }
}
