//! Layout and SVG output for plant-like vertical charts across four style
//! axes: trunk form, anchoring, decoration and animation.

mod frames;
pub mod geometry;
mod layout;
mod style;
mod svg;

use thiserror::Error;

pub use frames::{design_space_gallery, gallery_data, render_frames, FrameSource, GALLERY_STYLES};
pub use geometry::Point;
pub use layout::{layout, layout_extents, Anchor, AnchorSides, ChartScene, Glyph, Side};
pub use style::{Anchoring, Animation, ChartDimensions, ChartStyle, Decoration, Trunk};
pub use svg::{num, render_svg, Canvas, LEAF_GREEN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("{positions} positions for {hours} hours")]
    LengthMismatch { positions: usize, hours: usize },
    #[error("charts show 3 to 10 hours, got {0}")]
    HourCount(usize),
    #[error("extent {0} outside [0, 1]")]
    ExtentRange(f64),
    #[error("unsupported style: {0}")]
    Unsupported(String),
    #[error("bad style: {0}")]
    BadStyle(String),
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("canvas has zero area")]
    ZeroCanvas,
}
