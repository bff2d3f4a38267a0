//! Workday forecast series and their segmentation into energy variations.
//!
//! A variation runs from a minimum, up to a maximum, and down to the next
//! minimum. Consecutive variations share their boundary minimum hour, and the
//! first and last samples of a series always count as minima.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::SeriesError;

/// Clock hour of a forecast sample.
///
/// The working day runs 8:00 to 17:59; hour 18 is also accepted because some
/// of the reference charts extend one hour past it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct HourSlot(u8);

impl HourSlot {
    pub const FIRST: u8 = 8;
    pub const LAST: u8 = 18;

    pub fn new(hour: u8) -> Result<Self, SeriesError> {
        if (Self::FIRST..=Self::LAST).contains(&hour) {
            Ok(HourSlot(hour))
        } else {
            Err(SeriesError::HourOutOfRange(hour))
        }
    }

    pub fn hour(self) -> u8 {
        self.0
    }

    /// Start-of-hour label, e.g. `13:00`.
    pub fn label(self) -> String {
        format!("{}:00", self.0)
    }

    /// End-of-hour label, e.g. `17:59`.
    pub fn end_label(self) -> String {
        format!("{}:59", self.0)
    }

    fn offset(self, by: usize) -> Option<HourSlot> {
        HourSlot::new(u8::try_from(self.0 as usize + by).ok()?).ok()
    }
}

impl TryFrom<u8> for HourSlot {
    type Error = SeriesError;

    fn try_from(hour: u8) -> Result<Self, Self::Error> {
        HourSlot::new(hour)
    }
}

impl From<HourSlot> for u8 {
    fn from(slot: HourSlot) -> u8 {
        slot.0
    }
}

impl fmt::Display for HourSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:00", self.0)
    }
}

/// Fraction of the maximum renewable-energy availability, in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Rate<T: Scalar = f64>(T);

impl<T: Scalar> Rate<T> {
    pub fn new(value: T) -> Result<Self, SeriesError> {
        // NaN fails both comparisons.
        if value >= T::zero() && value <= T::one() {
            Ok(Rate(value))
        } else {
            Err(SeriesError::RateOutOfRange(value.to_f64_lossy()))
        }
    }

    pub fn zero() -> Self {
        Rate(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Contiguous hourly rates for one working day.
#[derive(Clone, Debug, PartialEq)]
pub struct ForecastSeries<T: Scalar = f64> {
    first: HourSlot,
    rates: Vec<Rate<T>>,
}

impl<T: Scalar> ForecastSeries<T> {
    pub const MIN_LEN: usize = 3;
    pub const MAX_LEN: usize = 10;

    pub fn new(first: HourSlot, rates: Vec<Rate<T>>) -> Result<Self, SeriesError> {
        if !(Self::MIN_LEN..=Self::MAX_LEN).contains(&rates.len()) {
            return Err(SeriesError::Length(rates.len()));
        }
        if first.offset(rates.len() - 1).is_none() {
            return Err(SeriesError::HourOutOfRange(first.hour() + rates.len() as u8 - 1));
        }
        Ok(ForecastSeries { first, rates })
    }

    /// Builds a series from `(hour, rate)` samples, which must already be in
    /// strictly consecutive hour order.
    pub fn from_samples(samples: &[(HourSlot, Rate<T>)]) -> Result<Self, SeriesError> {
        let first = samples.first().ok_or(SeriesError::Length(0))?.0;
        for (i, pair) in samples.windows(2).enumerate() {
            if pair[1].0.hour() != pair[0].0.hour() + 1 {
                return Err(SeriesError::NonContiguous {
                    index: i + 1,
                    expected: pair[0].0.hour() + 1,
                    found: pair[1].0.hour(),
                });
            }
        }
        Self::new(first, samples.iter().map(|s| s.1).collect())
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn first_hour(&self) -> HourSlot {
        self.first
    }

    pub fn last_hour(&self) -> HourSlot {
        self.hour_at(self.len() - 1)
    }

    pub fn rates(&self) -> &[Rate<T>] {
        &self.rates
    }

    pub fn hours(&self) -> Vec<HourSlot> {
        (0..self.len()).map(|i| self.hour_at(i)).collect()
    }

    pub fn samples(&self) -> Vec<(HourSlot, Rate<T>)> {
        self.hours().into_iter().zip(self.rates.iter().copied()).collect()
    }

    pub fn hour_at(&self, index: usize) -> HourSlot {
        HourSlot(self.first.0 + index as u8)
    }

    pub fn index_of(&self, hour: HourSlot) -> Option<usize> {
        let idx = hour.hour().checked_sub(self.first.hour())? as usize;
        (idx < self.len()).then_some(idx)
    }

    pub fn rate_at(&self, hour: HourSlot) -> Option<Rate<T>> {
        self.index_of(hour).map(|i| self.rates[i])
    }

    /// True when `variation` lies inside this series with the same rates.
    pub fn contains(&self, variation: &Variation<T>) -> bool {
        match (self.index_of(variation.start), self.index_of(variation.end)) {
            (Some(s), Some(e)) => self.rates[s..=e] == variation.rates[..],
            _ => false,
        }
    }
}

/// A minimum, maximum, minimum segment of a series.
#[derive(Clone, Debug, PartialEq)]
pub struct Variation<T: Scalar = f64> {
    start: HourSlot,
    peak: HourSlot,
    end: HourSlot,
    rates: Vec<Rate<T>>,
}

impl<T: Scalar> Variation<T> {
    /// Validates unimodality and locates the peak (earliest hour on ties).
    pub fn new(start: HourSlot, rates: Vec<Rate<T>>) -> Result<Self, SeriesError> {
        if rates.is_empty() {
            return Err(SeriesError::Length(0));
        }
        let end = start
            .offset(rates.len() - 1)
            .ok_or(SeriesError::HourOutOfRange(start.hour() + rates.len() as u8 - 1))?;
        let top = first_argmax(&rates);
        let rising = rates[..=top].windows(2).all(|w| w[0] <= w[1]);
        let falling = rates[top..].windows(2).all(|w| w[0] >= w[1]);
        if !rising || !falling {
            return Err(SeriesError::NotUnimodal);
        }
        Ok(Variation { start, peak: HourSlot(start.0 + top as u8), end, rates })
    }

    /// Piecewise-linear variation hitting the given anchors, rising from 0 at
    /// `start` to 1 at `peak` and back to 0 at `end`.
    ///
    /// A degenerate side (`start == peak` or `peak == end`) keeps the peak at 1.
    pub fn interpolated(start: HourSlot, peak: HourSlot, end: HourSlot) -> Result<Self, SeriesError> {
        if !(start <= peak && peak <= end) {
            return Err(SeriesError::NotUnimodal);
        }
        let rise = i64::from(peak.0 - start.0);
        let fall = i64::from(end.0 - peak.0);
        let rates = (start.0..=end.0)
            .map(|h| {
                let h = i64::from(h);
                let v = if h <= i64::from(peak.0) {
                    if rise == 0 {
                        T::one()
                    } else {
                        T::from_ratio(h - i64::from(start.0), rise)
                    }
                } else {
                    T::from_ratio(i64::from(end.0) - h, fall)
                };
                Rate::new(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Variation::new(start, rates)
    }

    pub fn start(&self) -> HourSlot {
        self.start
    }

    pub fn peak(&self) -> HourSlot {
        self.peak
    }

    pub fn end(&self) -> HourSlot {
        self.end
    }

    pub fn rates(&self) -> &[Rate<T>] {
        &self.rates
    }

    pub fn peak_rate(&self) -> Rate<T> {
        self.rates[(self.peak.0 - self.start.0) as usize]
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn hours(&self) -> impl Iterator<Item = HourSlot> {
        (self.start.0..=self.end.0).map(HourSlot)
    }

    pub fn contains_hour(&self, hour: HourSlot) -> bool {
        self.start <= hour && hour <= self.end
    }

    /// The variation as a standalone series.
    pub fn to_series(&self) -> Result<ForecastSeries<T>, SeriesError> {
        ForecastSeries::new(self.start, self.rates.clone())
    }
}

fn first_argmax<T: PartialOrd>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Inclusive pair of hours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HourRange {
    pub from: HourSlot,
    pub to: HourSlot,
}

/// Ascending and descending slopes of a variation; `None` marks an empty side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeRanges {
    pub ascending: Option<HourRange>,
    pub descending: Option<HourRange>,
}

/// When to recharge storage (the peak) and when to start discharging it
/// (the start of the variation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StorageAdvice {
    pub recharge: HourSlot,
    pub discharge_start: HourSlot,
}

/// Splits a series into consecutive variations.
///
/// Plateaus are absorbed into the run they interrupt, so a variation's end
/// is the last hour of the falling run. Returns an empty list for a flat
/// series.
pub fn segment_variations<T: Scalar>(series: &ForecastSeries<T>) -> Vec<Variation<T>> {
    let rates = series.rates();
    let n = rates.len();
    if rates.windows(2).all(|w| w[0] == w[1]) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start < n - 1 {
        let mut top = start;
        while top + 1 < n && rates[top + 1] >= rates[top] {
            top += 1;
        }
        let mut end = top;
        while end + 1 < n && rates[end + 1] <= rates[end] {
            end += 1;
        }
        let variation = Variation::new(series.hour_at(start), rates[start..=end].to_vec())
            .expect("rise-then-fall run is unimodal");
        out.push(variation);
        start = end;
    }
    out
}

pub fn peak_hour<T: Scalar>(variation: &Variation<T>) -> HourSlot {
    variation.peak()
}

pub fn slope_ranges<T: Scalar>(variation: &Variation<T>) -> SlopeRanges {
    let (s, p, e) = (variation.start(), variation.peak(), variation.end());
    SlopeRanges {
        ascending: (s < p).then_some(HourRange { from: s, to: p }),
        descending: (p < e).then_some(HourRange { from: p, to: e }),
    }
}

pub fn storage_advice<T: Scalar>(variation: &Variation<T>) -> StorageAdvice {
    StorageAdvice { recharge: peak_hour(variation), discharge_start: variation.start() }
}
