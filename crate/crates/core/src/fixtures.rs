//! Reference variations from the three chart studies.
//!
//! Only the anchors (start, peak, end hours) are known; rates are rebuilt by
//! piecewise-linear interpolation from 0 at the minima to 1 at the peak.

use crate::scalar::Scalar;
use crate::series::{ForecastSeries, HourSlot, Variation};
use crate::SeriesError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Study {
    /// Six static low-fidelity charts.
    FirstOnline,
    /// Animated bamboo and leaf charts.
    SecondOnline,
    /// Four prototypes over three days.
    UserStudy,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub study: Study,
    /// Length column as printed in the source table, in hours.
    pub hours: u8,
    pub start: u8,
    pub peak: u8,
    pub end: u8,
    /// Reported time to display the whole variation, when the table has one.
    pub display_seconds: Option<f64>,
}

impl Fixture {
    pub fn anchors(&self) -> (u8, u8, u8) {
        (self.start, self.peak, self.end)
    }

    pub fn variation<T: Scalar>(&self) -> Result<Variation<T>, SeriesError> {
        Variation::interpolated(HourSlot::new(self.start)?, HourSlot::new(self.peak)?, HourSlot::new(self.end)?)
    }

    pub fn series<T: Scalar>(&self) -> Result<ForecastSeries<T>, SeriesError> {
        self.variation()?.to_series()
    }
}

const fn row(name: &'static str, study: Study, hours: u8, start: u8, peak: u8, end: u8, secs: f64) -> Fixture {
    Fixture {
        name,
        study,
        hours,
        start,
        peak,
        end,
        display_seconds: if secs > 0.0 { Some(secs) } else { None },
    }
}

use Study::*;

pub const FIXTURES: [Fixture; 32] = [
    row("online1-bar-one-straight", FirstOnline, 8, 8, 11, 15, 0.0),
    row("online1-bar-one-curvy", FirstOnline, 8, 8, 11, 15, 0.0),
    row("online1-bar-alt-curvy", FirstOnline, 8, 8, 11, 15, 0.0),
    row("online1-leaf-one-straight", FirstOnline, 10, 9, 13, 17, 0.0),
    row("online1-leaf-one-curvy", FirstOnline, 9, 10, 14, 18, 0.0),
    row("online1-leaf-alt-curvy", FirstOnline, 9, 10, 14, 18, 0.0),
    row("bambhisto-1", SecondOnline, 9, 9, 13, 17, 0.0),
    row("bambhisto-2", SecondOnline, 5, 9, 11, 13, 0.0),
    row("bambhisto-3", SecondOnline, 5, 13, 16, 17, 0.0),
    row("planthisto-1", SecondOnline, 8, 10, 14, 17, 0.0),
    row("planthisto-2", SecondOnline, 6, 9, 12, 14, 0.0),
    row("planthisto-3", SecondOnline, 4, 14, 16, 17, 0.0),
    row("plantscreen-monday", UserStudy, 10, 8, 13, 17, 20.0),
    row("plantscreen-tuesday", UserStudy, 8, 10, 15, 17, 16.0),
    row("plantscreen-wednesday-1", UserStudy, 4, 8, 10, 11, 0.0),
    row("plantscreen-wednesday-2", UserStudy, 3, 11, 12, 13, 0.0),
    row("plantscreen-wednesday-3", UserStudy, 5, 13, 14, 17, 0.0),
    row("plantform-monday", UserStudy, 10, 8, 12, 17, 19.0),
    row("plantform-tuesday", UserStudy, 8, 10, 16, 17, 14.0),
    row("plantform-wednesday-1", UserStudy, 5, 8, 9, 12, 0.0),
    row("plantform-wednesday-2", UserStudy, 4, 12, 14, 15, 0.0),
    row("plantform-wednesday-3", UserStudy, 3, 15, 16, 17, 0.0),
    row("cairnscreen-monday", UserStudy, 10, 8, 14, 17, 20.0),
    row("cairnscreen-tuesday", UserStudy, 8, 10, 13, 17, 16.0),
    row("cairnscreen-wednesday-1", UserStudy, 5, 8, 11, 12, 0.0),
    row("cairnscreen-wednesday-2", UserStudy, 3, 12, 13, 14, 0.0),
    row("cairnscreen-wednesday-3", UserStudy, 4, 14, 15, 17, 0.0),
    row("cairnform-monday", UserStudy, 10, 8, 11, 17, 12.0),
    row("cairnform-tuesday", UserStudy, 8, 10, 14, 17, 8.0),
    row("cairnform-wednesday-1", UserStudy, 3, 8, 9, 10, 0.0),
    row("cairnform-wednesday-2", UserStudy, 5, 10, 11, 14, 0.0),
    row("cairnform-wednesday-3", UserStudy, 4, 14, 16, 17, 0.0),
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

pub const DEVICES: [&str; 4] = ["plantscreen", "plantform", "cairnscreen", "cairnform"];

/// A device's whole Wednesday: its three short variations joined at their
/// shared minima into one 10-hour series.
pub fn wednesday<T: Scalar>(device: &str) -> Option<Result<ForecastSeries<T>, SeriesError>> {
    if !DEVICES.contains(&device) {
        return None;
    }
    let parts: Vec<&Fixture> =
        (1..=3).filter_map(|i| fixture(&format!("{device}-wednesday-{i}"))).collect();
    Some((|| {
        let mut rates = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            let v = part.variation::<T>()?;
            let skip = usize::from(i > 0);
            rates.extend_from_slice(&v.rates()[skip..]);
        }
        ForecastSeries::new(HourSlot::new(parts[0].start)?, rates)
    })())
}
