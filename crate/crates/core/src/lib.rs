//! Forecast series, peak-relative encoding and motion planning for
//! plant-like vertical charts.
//!
//! Series and encoders are generic over [`Scalar`] (`f32`, `f64` or the exact
//! [`Rational`]); the aliases below name the common instantiations.

mod error;
pub mod encoder;
pub mod fixtures;
pub mod load;
pub mod motion;
pub mod scalar;
pub mod series;

pub use encoder::{
    encode_absolute, encode_relative, encode_series, encode_six_step, position_rate_interval, EncodingMode,
    LeafPosition, RatioInterval,
};
pub use error::{EncodeError, LoadError, MotionError, SeriesError};
pub use load::{load_series, series_to_json};
pub use motion::{
    calibrate_step_rate, lowfi_series_timeline, lowfi_timeline, plan, plan_graphical, plan_physical,
    transition_plan, DeviceKind, DeviceProfile, FrameTimeline, MotionCommand, MotionPlan, TimelineFrame, LOWFI_STEP_PT,
    LOWFI_TICK_S,
};
pub use scalar::{Rational, Scalar};
pub use series::{
    peak_hour, segment_variations, slope_ranges, storage_advice, ForecastSeries, HourRange, HourSlot, Rate,
    SlopeRanges, StorageAdvice, Variation,
};

pub type Series = ForecastSeries<f64>;
pub type SeriesF32 = ForecastSeries<f32>;
pub type ExactSeries = ForecastSeries<Rational>;
pub type ExactRate = Rate<Rational>;
pub type ExactVariation = Variation<Rational>;
