//! Brute-force extrema scanner used to check segmentation.
//!
//! Kept independent of the run-walking segmenter: it marks every interior
//! valley (a sample followed by a rise whose nearest differing left
//! neighbour is higher) and takes the first maximum between cuts.

#![allow(dead_code)]

pub fn scan_variations(rates: &[u8]) -> Vec<(usize, usize, usize)> {
    let n = rates.len();
    if rates.iter().all(|r| *r == rates[0]) {
        return Vec::new();
    }
    let mut cuts = vec![0];
    for i in 1..n - 1 {
        let rises_after = rates[i + 1] > rates[i];
        let left = rates[..i].iter().rev().find(|r| **r != rates[i]);
        let higher_before = matches!(left, Some(l) if *l > rates[i]);
        if rises_after && higher_before {
            cuts.push(i);
        }
    }
    cuts.push(n - 1);
    cuts.windows(2)
        .map(|w| {
            let (s, e) = (w[0], w[1]);
            let max = *rates[s..=e].iter().max().unwrap();
            let peak = (s..=e).find(|&i| rates[i] == max).unwrap();
            (s, peak, e)
        })
        .collect()
}

#[test]
fn scanner_on_hand_cases() {
    assert_eq!(scan_variations(&[0, 5, 10, 5, 0, 3, 6, 9, 4, 0]), vec![(0, 2, 4), (4, 7, 9)]);
    assert_eq!(scan_variations(&[0, 0, 0]), vec![]);
    assert_eq!(scan_variations(&[3, 1, 1, 4]), vec![(0, 0, 2), (2, 3, 3)]);
}
