//! Scalar abstraction for rate arithmetic.
//!
//! Segmentation and encoding only need ordering, division and a handful of
//! exact decimal thresholds, so they run unchanged over `f32`, `f64` and the
//! exact [`Rational`] type.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

/// Number type that rates and ratios are expressed in.
pub trait Scalar:
    Copy + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Slack applied to closed upper bin bounds and to the `ratio == 1` test.
    /// Zero for exact types.
    fn tolerance() -> Self;

    /// `num / den`, exact where the type allows.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    // 1e-9 is below f32 resolution near 1.0.
    fn tolerance() -> Self {
        4.0 * f32::EPSILON
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_thresholds_are_exact_for_rationals() {
        let tenth = Rational::from_ratio(1, 10);
        assert_eq!(tenth * Rational::from_integer(10), Rational::from_integer(1));
        assert_eq!(Rational::tolerance(), Rational::from_integer(0));
    }

    #[test]
    fn float_thresholds_match_literals() {
        assert_eq!(f64::from_ratio(1, 10), 0.1);
        assert_eq!(f64::from_ratio(9, 10), 0.9);
        assert_eq!(f32::from_ratio(1, 5), 0.2f32);
    }
}
