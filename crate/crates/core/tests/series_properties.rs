mod oracle;

use plantchart_core::{segment_variations, ExactSeries, ForecastSeries, HourSlot, Rate, Rational, Series, Variation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid_series(levels: &[u8]) -> Series {
    let rates = levels.iter().map(|l| Rate::new(f64::from(*l) / 10.0).unwrap()).collect();
    ForecastSeries::new(HourSlot::new(8).unwrap(), rates).unwrap()
}

fn anchors(series: &Series) -> Vec<(usize, usize, usize)> {
    let base = series.first_hour().hour() as usize;
    segment_variations(series)
        .iter()
        .map(|v| {
            (
                v.start().hour() as usize - base,
                v.peak().hour() as usize - base,
                v.end().hour() as usize - base,
            )
        })
        .collect()
}

#[test]
fn segmenter_matches_scanner_on_random_grid_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20_000 {
        let len = rng.gen_range(3..=10);
        let levels: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=10)).collect();
        assert_eq!(anchors(&grid_series(&levels)), oracle::scan_variations(&levels), "{levels:?}");
    }
}

#[test]
fn exact_and_float_segmentations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2_000 {
        let levels: Vec<u8> = (0..10).map(|_| rng.gen_range(0..=10)).collect();
        let exact = ExactSeries::new(
            HourSlot::new(8).unwrap(),
            levels.iter().map(|l| Rate::new(Rational::new(i64::from(*l), 10)).unwrap()).collect(),
        )
        .unwrap();
        let a: Vec<_> = segment_variations(&exact).iter().map(|v| (v.start(), v.peak(), v.end())).collect();
        let b: Vec<_> =
            segment_variations(&grid_series(&levels)).iter().map(|v| (v.start(), v.peak(), v.end())).collect();
        assert_eq!(a, b);
    }
}

proptest! {
    #[test]
    fn variations_tile_the_series(levels in prop::collection::vec(0u8..=10, 3..=10)) {
        let series = grid_series(&levels);
        let found = segment_variations(&series);
        if found.is_empty() {
            prop_assert!(levels.iter().all(|l| *l == levels[0]));
        } else {
            prop_assert_eq!(found[0].start(), series.first_hour());
            prop_assert_eq!(found.last().unwrap().end(), series.last_hour());
            for w in found.windows(2) {
                prop_assert_eq!(w[0].end(), w[1].start());
            }
            let mut hours: Vec<u8> = found.iter().flat_map(|v| v.hours().map(|h| h.hour())).collect();
            hours.dedup();
            prop_assert_eq!(hours, series.hours().iter().map(|h| h.hour()).collect::<Vec<_>>());
            for v in &found {
                prop_assert!(series.contains(v));
            }
        }
    }

    #[test]
    fn segmenting_one_variation_returns_it(start in 8u8..=15, rise in 0u8..=5, fall in 0u8..=5) {
        let peak = start + rise;
        let end = peak + fall;
        prop_assume!(end <= 18 && end - start + 1 >= 3 && end - start < 10);
        let v: Variation = Variation::interpolated(
            HourSlot::new(start).unwrap(), HourSlot::new(peak).unwrap(), HourSlot::new(end).unwrap()).unwrap();
        let found = segment_variations(&v.to_series().unwrap());
        prop_assert_eq!(found, vec![v]);
    }
}
