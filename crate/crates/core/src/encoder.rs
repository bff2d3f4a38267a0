//! Rate to position encoders.
//!
//! Peak-relative encoding bins the ratio `rate / peak` into seven positions:
//!
//! ```text
//! ratio   [0,.1]  ].1,.2]  ].2,.5]  ].5,.8]  ].8,.9]  ].9,1[  1
//! pos       0       3        4        5        6        7     10
//! ```
//!
//! Positions 1, 2, 8 and 9 are never emitted in that mode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::series::{ForecastSeries, Rate, Variation};
use crate::EncodeError;

/// Discrete actuation position, 0 (furled) to 10 (flat).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct LeafPosition(u8);

impl LeafPosition {
    pub const MAX: u8 = 10;
    pub const ZERO: LeafPosition = LeafPosition(0);
    pub const FULL: LeafPosition = LeafPosition(10);

    pub fn new(position: u8) -> Result<Self, EncodeError> {
        if position <= Self::MAX {
            Ok(LeafPosition(position))
        } else {
            Err(EncodeError::PositionRange(position))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Fraction of the full range, `position / 10`.
    pub fn extent(self) -> f64 {
        f64::from(self.0) / f64::from(Self::MAX)
    }

    pub fn distance(self, other: LeafPosition) -> u8 {
        self.0.abs_diff(other.0)
    }
}

impl TryFrom<u8> for LeafPosition {
    type Error = EncodeError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        LeafPosition::new(value)
    }
}

impl From<LeafPosition> for u8 {
    fn from(p: LeafPosition) -> u8 {
        p.0
    }
}

impl fmt::Display for LeafPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingMode {
    PeakRelative,
    AbsoluteLinear,
    SixStep,
}

impl EncodingMode {
    pub fn name(self) -> &'static str {
        match self {
            EncodingMode::PeakRelative => "relative",
            EncodingMode::AbsoluteLinear => "absolute",
            EncodingMode::SixStep => "six-step",
        }
    }

    /// Every position this mode can produce, ascending.
    pub fn emittable(self) -> &'static [u8] {
        match self {
            EncodingMode::PeakRelative => &[0, 3, 4, 5, 6, 7, 10],
            EncodingMode::AbsoluteLinear => &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            EncodingMode::SixStep => &[0, 2, 4, 6, 8, 10],
        }
    }
}

impl FromStr for EncodingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "relative" | "peak-relative" => Ok(EncodingMode::PeakRelative),
            "absolute" | "absolute-linear" => Ok(EncodingMode::AbsoluteLinear),
            "six-step" | "sixstep" => Ok(EncodingMode::SixStep),
            other => Err(format!("unknown encoding mode `{other}` (relative, absolute, six-step)")),
        }
    }
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Upper bounds (tenths) of the peak-relative bins below the peak.
const RELATIVE_BINS: [(i64, u8); 5] = [(1, 0), (2, 3), (5, 4), (8, 5), (9, 6)];
const BELOW_PEAK: u8 = 7;

pub fn encode_relative<T: Scalar>(rate: Rate<T>, peak_rate: Rate<T>) -> Result<LeafPosition, EncodeError> {
    let (rate, peak) = (rate.value(), peak_rate.value());
    if peak <= T::zero() {
        return Err(EncodeError::FlatVariation);
    }
    if rate > peak {
        return Err(EncodeError::AbovePeak { rate: rate.to_f64_lossy(), peak: peak.to_f64_lossy() });
    }
    let ratio = rate / peak;
    let tol = T::tolerance();
    if ratio >= T::one() - tol {
        return Ok(LeafPosition::FULL);
    }
    let position = RELATIVE_BINS
        .iter()
        .find(|(tenths, _)| ratio <= T::from_ratio(*tenths, 10) + tol)
        .map_or(BELOW_PEAK, |(_, p)| *p);
    Ok(LeafPosition(position))
}

/// `round(rate * 10)`, halves rounding up.
pub fn encode_absolute<T: Scalar>(rate: Rate<T>) -> LeafPosition {
    let (rate, tol) = (rate.value(), T::tolerance());
    let position = (1..=10).filter(|k| rate >= T::from_ratio(2 * k - 1, 20) - tol).count();
    LeafPosition(position as u8)
}

/// `ceil(rate / 0.2)`: one of the six unfold steps 0, 20, ..., 100 %.
pub fn encode_six_step<T: Scalar>(rate: Rate<T>) -> u8 {
    let (rate, tol) = (rate.value(), T::tolerance());
    (0..5).filter(|k| rate > T::from_ratio(*k, 5) + tol).count() as u8
}

/// Per-hour positions of `series` showing `variation`; hours outside the
/// variation stay at 0.
pub fn encode_series<T: Scalar>(
    series: &ForecastSeries<T>,
    variation: &Variation<T>,
    mode: EncodingMode,
) -> Result<Vec<LeafPosition>, EncodeError> {
    if !series.contains(variation) {
        return Err(EncodeError::ForeignVariation {
            start: variation.start().hour(),
            end: variation.end().hour(),
        });
    }
    let peak = variation.peak_rate();
    series
        .samples()
        .into_iter()
        .map(|(hour, rate)| {
            if !variation.contains_hour(hour) {
                return Ok(LeafPosition::ZERO);
            }
            match mode {
                EncodingMode::PeakRelative => encode_relative(rate, peak),
                EncodingMode::AbsoluteLinear => Ok(encode_absolute(rate)),
                EncodingMode::SixStep => Ok(LeafPosition(2 * encode_six_step(rate))),
            }
        })
        .collect()
}

/// Interval of ratios (or rates, outside peak-relative mode) that encode to
/// one position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioInterval<T: Scalar = f64> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T: Scalar> RatioInterval<T> {
    pub fn contains(&self, x: T) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn midpoint(&self) -> T {
        (self.lo + self.hi) / (T::one() + T::one())
    }
}

impl<T: Scalar> fmt::Display for RatioInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo.to_f64_lossy(),
            self.hi.to_f64_lossy(),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Inverse of the encoder: which ratios map to `position` under `mode`.
pub fn position_rate_interval<T: Scalar>(
    position: LeafPosition,
    mode: EncodingMode,
) -> Result<RatioInterval<T>, EncodeError> {
    let not_emittable = || EncodeError::NotEmittable { position: position.0, mode: mode.name() };
    let tenth = |n: i64| T::from_ratio(n, 10);
    let interval = |lo, hi, lo_closed, hi_closed| RatioInterval { lo, hi, lo_closed, hi_closed };
    let p = i64::from(position.0);
    Ok(match mode {
        EncodingMode::PeakRelative => match position.0 {
            0 => interval(T::zero(), tenth(1), true, true),
            3 => interval(tenth(1), tenth(2), false, true),
            4 => interval(tenth(2), tenth(5), false, true),
            5 => interval(tenth(5), tenth(8), false, true),
            6 => interval(tenth(8), tenth(9), false, true),
            7 => interval(tenth(9), T::one(), false, false),
            10 => interval(T::one(), T::one(), true, true),
            _ => return Err(not_emittable()),
        },
        EncodingMode::AbsoluteLinear => match position.0 {
            0 => interval(T::zero(), T::from_ratio(1, 20), true, false),
            10 => interval(T::from_ratio(19, 20), T::one(), true, true),
            _ => interval(T::from_ratio(2 * p - 1, 20), T::from_ratio(2 * p + 1, 20), true, false),
        },
        EncodingMode::SixStep => match position.0 {
            0 => interval(T::zero(), T::zero(), true, true),
            2 | 4 | 6 | 8 | 10 => interval(T::from_ratio(p / 2 - 1, 5), T::from_ratio(p / 2, 5), false, true),
            _ => return Err(not_emittable()),
        },
    })
}
