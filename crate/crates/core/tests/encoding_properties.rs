use plantchart_core::{
    encode_relative, encode_series, position_rate_interval, segment_variations, EncodingMode, ForecastSeries,
    HourSlot, LeafPosition, Rate, RatioInterval,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn encoded_ratio_lies_in_its_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let r: f64 = rng.gen_range(0.0..=1.0);
        let peak: f64 = rng.gen_range(0.05..=1.0);
        let p = encode_relative(Rate::new(r * peak).unwrap(), Rate::new(peak).unwrap()).unwrap();
        let iv: RatioInterval = position_rate_interval(p, EncodingMode::PeakRelative).unwrap();
        let ratio = r * peak / peak;
        // Bin edges carry the encoder's 1e-9 slack.
        let inside = iv.contains(ratio) || (ratio - iv.hi).abs() < 1e-9 || (ratio - iv.lo).abs() < 1e-9;
        assert!(inside, "ratio {ratio} -> {p} not in {iv}");
    }
}

proptest! {
    #[test]
    fn relative_encoding_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0, peak in 0.01f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let enc = |x: f64| encode_relative(Rate::new(x * peak).unwrap(), Rate::new(peak).unwrap()).unwrap();
        prop_assert!(enc(lo) <= enc(hi));
    }

    #[test]
    fn only_peak_rates_encode_full(levels in prop::collection::vec(0u8..=10, 3..=10)) {
        let rates = levels.iter().map(|l| Rate::new(f64::from(*l) / 10.0).unwrap()).collect();
        let series = ForecastSeries::new(HourSlot::new(8).unwrap(), rates).unwrap();
        for v in segment_variations(&series) {
            let encoded = encode_series(&series, &v, EncodingMode::PeakRelative).unwrap();
            for (i, p) in encoded.iter().enumerate() {
                let hour = series.hour_at(i);
                let at_peak = v.contains_hour(hour) && series.rates()[i] == v.peak_rate();
                prop_assert_eq!(*p == LeafPosition::FULL, at_peak);
            }
        }
    }
}
