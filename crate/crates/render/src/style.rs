use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::RenderError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trunk {
    Straight,
    Curvy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchoring {
    OneSided,
    TwoSided,
    Alternated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decoration {
    Bar,
    Bamboo,
    Leaf,
    Ring,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Animation {
    Growth,
    Unfurl,
}

impl Trunk {
    pub fn name(self) -> &'static str {
        match self {
            Trunk::Straight => "straight",
            Trunk::Curvy => "curvy",
        }
    }
}

impl Anchoring {
    pub fn name(self) -> &'static str {
        match self {
            Anchoring::OneSided => "one-sided",
            Anchoring::TwoSided => "two-sided",
            Anchoring::Alternated => "alternated",
        }
    }
}

impl Decoration {
    pub fn name(self) -> &'static str {
        match self {
            Decoration::Bar => "bar",
            Decoration::Bamboo => "bamboo",
            Decoration::Leaf => "leaf",
            Decoration::Ring => "ring",
        }
    }
}

impl Animation {
    pub fn name(self) -> &'static str {
        match self {
            Animation::Growth => "growth",
            Animation::Unfurl => "unfurl",
        }
    }
}

/// One point of the four-axis design space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartStyle {
    pub decoration: Decoration,
    pub anchoring: Anchoring,
    pub trunk: Trunk,
    pub animation: Animation,
}

impl ChartStyle {
    pub const fn new(decoration: Decoration, anchoring: Anchoring, trunk: Trunk, animation: Animation) -> Self {
        ChartStyle { decoration, anchoring, trunk, animation }
    }

    /// Rings only read as rings when both halves are drawn, and only leaves
    /// can unfurl.
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.decoration == Decoration::Ring && self.anchoring != Anchoring::TwoSided {
            return Err(RenderError::Unsupported(format!("{self}: rings need two-sided anchoring")));
        }
        if self.animation == Animation::Unfurl && self.decoration != Decoration::Leaf {
            return Err(RenderError::Unsupported(format!("{self}: only leaves unfurl")));
        }
        Ok(())
    }

    /// File-name friendly form, e.g. `leaf-two-sided-curvy-unfurl`.
    pub fn slug(&self) -> String {
        self.to_string().replace('/', "-")
    }
}

impl fmt::Display for ChartStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            self.decoration.name(),
            self.anchoring.name(),
            self.trunk.name(),
            self.animation.name()
        )
    }
}

/// Parses comma- or slash-separated axis values in any order, for example
/// `leaf,two-sided,curvy`. Omitted axes default to straight, one-sided, and
/// unfurl for leaves or growth otherwise.
impl FromStr for ChartStyle {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mut decoration, mut anchoring, mut trunk, mut animation) = (None, None, None, None);
        for token in s.split([',', '/']).map(str::trim).filter(|t| !t.is_empty()) {
            match token.to_ascii_lowercase().as_str() {
                "bar" => set(&mut decoration, Decoration::Bar, token)?,
                "bamboo" => set(&mut decoration, Decoration::Bamboo, token)?,
                "leaf" => set(&mut decoration, Decoration::Leaf, token)?,
                "ring" => set(&mut decoration, Decoration::Ring, token)?,
                "one" | "one-sided" => set(&mut anchoring, Anchoring::OneSided, token)?,
                "two" | "two-sided" => set(&mut anchoring, Anchoring::TwoSided, token)?,
                "alt" | "alternated" => set(&mut anchoring, Anchoring::Alternated, token)?,
                "straight" => set(&mut trunk, Trunk::Straight, token)?,
                "curvy" => set(&mut trunk, Trunk::Curvy, token)?,
                "growth" => set(&mut animation, Animation::Growth, token)?,
                "unfurl" | "unfurling" => set(&mut animation, Animation::Unfurl, token)?,
                other => return Err(RenderError::BadStyle(format!("unknown style token '{other}'"))),
            }
        }
        let decoration = decoration.ok_or_else(|| RenderError::BadStyle("no decoration given".into()))?;
        let default_animation = if decoration == Decoration::Leaf { Animation::Unfurl } else { Animation::Growth };
        let style = ChartStyle {
            decoration,
            anchoring: anchoring.unwrap_or(Anchoring::OneSided),
            trunk: trunk.unwrap_or(Trunk::Straight),
            animation: animation.unwrap_or(default_animation),
        };
        style.validate()?;
        Ok(style)
    }
}

fn set<T>(slot: &mut Option<T>, value: T, token: &str) -> Result<(), RenderError> {
    if slot.is_some() {
        return Err(RenderError::BadStyle(format!("axis given twice at '{token}'")));
    }
    *slot = Some(value);
    Ok(())
}

/// Physical chart size in centimeters. Glyph extent is a length for bars and
/// leaves and a diameter for rings; thickness is interpolated the same way.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDimensions {
    pub chart_height: f64,
    pub glyph_min_extent: f64,
    pub glyph_max_extent: f64,
    pub thickness_min_extent: f64,
    pub thickness_max_extent: f64,
}

impl ChartDimensions {
    pub fn new(chart_height: f64, glyph_min_extent: f64, glyph_max_extent: f64) -> Result<Self, RenderError> {
        let dims = ChartDimensions {
            chart_height,
            glyph_min_extent,
            glyph_max_extent,
            thickness_min_extent: 2.0,
            thickness_max_extent: 2.0,
        };
        dims.validate()?;
        Ok(dims)
    }

    pub fn with_thickness(mut self, at_min: f64, at_max: f64) -> Self {
        self.thickness_min_extent = at_min;
        self.thickness_max_extent = at_max;
        self
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        let finite = [
            self.chart_height,
            self.glyph_min_extent,
            self.glyph_max_extent,
            self.thickness_min_extent,
            self.thickness_max_extent,
        ]
        .iter()
        .all(|v| v.is_finite() && *v >= 0.0);
        if !finite || self.chart_height <= 0.0 || self.glyph_min_extent >= self.glyph_max_extent {
            return Err(RenderError::BadDimensions(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn plantscreen() -> Self {
        ChartDimensions {
            chart_height: 75.5,
            glyph_min_extent: 4.7,
            glyph_max_extent: 10.3,
            thickness_min_extent: 4.5,
            thickness_max_extent: 2.9,
        }
    }

    pub fn plantform() -> Self {
        ChartDimensions {
            chart_height: 69.0,
            glyph_min_extent: 6.5,
            glyph_max_extent: 13.7,
            thickness_min_extent: 6.0,
            thickness_max_extent: 0.5,
        }
    }

    pub fn cairnscreen() -> Self {
        ChartDimensions {
            chart_height: 73.7,
            glyph_min_extent: 0.0,
            glyph_max_extent: 25.0,
            thickness_min_extent: 6.0,
            thickness_max_extent: 6.0,
        }
    }

    pub fn cairnform() -> Self {
        ChartDimensions {
            chart_height: 92.5,
            glyph_min_extent: 35.0,
            glyph_max_extent: 62.0,
            thickness_min_extent: 1.8,
            thickness_max_extent: 0.7,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "plantscreen" => Some(Self::plantscreen()),
            "plantform" => Some(Self::plantform()),
            "cairnscreen" => Some(Self::cairnscreen()),
            "cairnform" => Some(Self::cairnform()),
            _ => None,
        }
    }

    pub fn extent_at(&self, e: f64) -> f64 {
        self.glyph_min_extent + e * (self.glyph_max_extent - self.glyph_min_extent)
    }

    pub fn thickness_at(&self, e: f64) -> f64 {
        self.thickness_min_extent + e * (self.thickness_max_extent - self.thickness_min_extent)
    }
}

impl Default for ChartDimensions {
    fn default() -> Self {
        Self::plantform()
    }
}
