//! Forecast documents: CSV with an `hour,rate` header, or JSON of the form
//! `{"date": "...", "samples": [{"hour": 8, "rate": 0.42}, ...]}`.
//!
//! Hours may be integers or `H:MM` strings; samples are sorted by hour before
//! the contiguity check. Rates are fractions, not percentages.

use serde_json::{json, Value};

use crate::scalar::Scalar;
use crate::series::{ForecastSeries, HourSlot, Rate};
use crate::LoadError;

struct RawSample {
    path: String,
    hour: i64,
    rate: f64,
}

/// Parses and validates a forecast document, detecting the format from its
/// first non-blank character.
pub fn load_series<T: Scalar>(document: &str) -> Result<ForecastSeries<T>, LoadError> {
    let raw = if document.trim_start().starts_with('{') {
        parse_json(document)?
    } else {
        parse_csv(document)?
    };
    build(raw)
}

fn malformed(path: impl Into<String>, message: impl ToString) -> LoadError {
    LoadError::Malformed { path: path.into(), message: message.to_string() }
}

fn parse_hour(path: &str, text: &str) -> Result<i64, LoadError> {
    let text = text.trim();
    let head = match text.split_once(':') {
        Some((h, m)) if m.len() == 2 && m.chars().all(|c| c.is_ascii_digit()) => h,
        Some(_) => return Err(malformed(path, format!("unrecognized hour `{text}`"))),
        None => text,
    };
    head.parse::<i64>().map_err(|_| malformed(path, format!("unrecognized hour `{text}`")))
}

fn parse_json(document: &str) -> Result<Vec<RawSample>, LoadError> {
    let root: Value = serde_json::from_str(document).map_err(|e| malformed("$", e))?;
    if let Some(date) = root.get("date") {
        if !date.is_string() {
            return Err(malformed("date", "expected a string"));
        }
    }
    let samples = root
        .get("samples")
        .ok_or_else(|| malformed("samples", "missing field"))?
        .as_array()
        .ok_or_else(|| malformed("samples", "expected an array"))?;
    samples
        .iter()
        .enumerate()
        .map(|(i, sample)| {
            let base = format!("samples[{i}]");
            let hour = match sample.get("hour") {
                Some(Value::Number(n)) => n
                    .as_i64()
                    .ok_or_else(|| malformed(format!("{base}.hour"), "expected an integer"))?,
                Some(Value::String(s)) => parse_hour(&format!("{base}.hour"), s)?,
                Some(_) => return Err(malformed(format!("{base}.hour"), "expected an integer")),
                None => return Err(malformed(format!("{base}.hour"), "missing field")),
            };
            let rate = sample
                .get("rate")
                .ok_or_else(|| malformed(format!("{base}.rate"), "missing field"))?
                .as_f64()
                .ok_or_else(|| malformed(format!("{base}.rate"), "expected a number"))?;
            Ok(RawSample { path: base, hour, rate })
        })
        .collect()
}

fn parse_csv(document: &str) -> Result<Vec<RawSample>, LoadError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(document.as_bytes());
    let headers = reader.headers().map_err(|e| malformed("header", e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| malformed("header", format!("missing `{name}` column")))
    };
    let (hour_col, rate_col) = (column("hour")?, column("rate")?);
    reader
        .records()
        .enumerate()
        .map(|(i, record)| {
            let base = format!("rows[{i}]");
            let record = record.map_err(|e| malformed(base.clone(), e))?;
            let hour_text = record.get(hour_col).ok_or_else(|| malformed(format!("{base}.hour"), "missing"))?;
            let rate_text = record.get(rate_col).ok_or_else(|| malformed(format!("{base}.rate"), "missing"))?;
            let hour = parse_hour(&format!("{base}.hour"), hour_text)?;
            let rate = rate_text
                .parse::<f64>()
                .map_err(|_| malformed(format!("{base}.rate"), format!("`{rate_text}` is not a number")))?;
            Ok(RawSample { path: base, hour, rate })
        })
        .collect()
}

fn build<T: Scalar>(raw: Vec<RawSample>) -> Result<ForecastSeries<T>, LoadError> {
    let mut samples = Vec::with_capacity(raw.len());
    for s in &raw {
        let slot = u8::try_from(s.hour)
            .ok()
            .and_then(|h| HourSlot::new(h).ok())
            .ok_or_else(|| LoadError::HourRange { path: format!("{}.hour", s.path), hour: s.hour })?;
        let range_err = || LoadError::RateRange { path: format!("{}.rate", s.path), hour: slot.hour(), value: s.rate };
        let value = T::from_f64(s.rate).ok_or_else(range_err)?;
        let rate = Rate::new(value).map_err(|_| range_err())?;
        samples.push((slot, rate));
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by_key(|&i| samples[i].0);
    for pair in order.windows(2) {
        let (prev, next) = (samples[pair[0]].0.hour(), samples[pair[1]].0.hour());
        if next != prev + 1 {
            return Err(LoadError::Contiguity {
                path: format!("{}.hour", raw[pair[1]].path),
                expected: prev + 1,
                found: next,
            });
        }
    }
    let sorted: Vec<_> = order.iter().map(|&i| samples[i]).collect();
    ForecastSeries::from_samples(&sorted).map_err(|source| LoadError::Series { path: "samples".into(), source })
}

/// JSON forecast document for `series`, in the format [`load_series`] reads.
pub fn series_to_json<T: Scalar>(series: &ForecastSeries<T>, date: Option<&str>) -> Value {
    let samples: Vec<Value> = series
        .samples()
        .iter()
        .map(|(h, r)| json!({ "hour": h.hour(), "rate": r.value().to_f64_lossy() }))
        .collect();
    match date {
        Some(d) => json!({ "date": d, "samples": samples }),
        None => json!({ "samples": samples }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn csv_doc(rows: &[(&str, &str)]) -> String {
        let mut s = String::from("hour,rate\n");
        for (h, r) in rows {
            s.push_str(&format!("{h},{r}\n"));
        }
        s
    }

    #[test]
    fn ten_csv_rows() {
        let rows: Vec<(String, String)> =
            (8..18).map(|h| (h.to_string(), format!("{:.2}", (h - 8) as f64 / 10.0))).collect();
        let refs: Vec<(&str, &str)> = rows.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let s: ForecastSeries = load_series(&csv_doc(&refs)).unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(s.first_hour().hour(), 8);
        assert_eq!(s.rates()[3].value(), 0.3);
    }

    #[test]
    fn json_document_with_clock_labels() {
        let doc = r#"{"date": "2024-03-04", "samples": [
            {"hour": "10:00", "rate": 0.1}, {"hour": 11, "rate": 0.9}, {"hour": 12, "rate": 0.0}]}"#;
        let s: ForecastSeries = load_series(doc).unwrap();
        assert_eq!(s.first_hour().hour(), 10);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn unsorted_rows_are_normalized() {
        let s: ForecastSeries = load_series(&csv_doc(&[("10", "0.2"), ("8", "0.0"), ("9", "0.5")])).unwrap();
        let values: Vec<f64> = s.rates().iter().map(|r| r.value()).collect();
        assert_eq!(values, vec![0.0, 0.5, 0.2]);
    }

    #[test]
    fn out_of_range_rate_names_hour() {
        let err = load_series::<f64>(&csv_doc(&[("8", "0.1"), ("9", "1.3"), ("10", "0.0")])).unwrap_err();
        assert_eq!(err, LoadError::RateRange { path: "rows[1].rate".into(), hour: 9, value: 1.3 });
        assert!(err.to_string().contains("hour 9"));
    }

    #[test]
    fn gap_in_hours_is_a_contiguity_error() {
        let err = load_series::<f64>(&csv_doc(&[("8", "0.1"), ("9", "0.2"), ("11", "0.0")])).unwrap_err();
        assert_eq!(err, LoadError::Contiguity { path: "rows[2].hour".into(), expected: 10, found: 11 });
    }

    #[test]
    fn malformed_inputs_carry_paths() {
        let err = load_series::<f64>(r#"{"samples": [{"hour": 8}]}"#).unwrap_err();
        assert_eq!(err.path(), "samples[0].rate");
        let err = load_series::<f64>("time,value\n8,0.1\n").unwrap_err();
        assert_eq!(err.path(), "header");
        let err = load_series::<f64>("hour,rate\n8,abc\n").unwrap_err();
        assert_eq!(err.path(), "rows[0].rate");
        let err = load_series::<f64>(r#"{"samples": [{"hour": 7, "rate": 0.1}]}"#).unwrap_err();
        assert_eq!(err, LoadError::HourRange { path: "samples[0].hour".into(), hour: 7 });
        let err = load_series::<f64>("{not json").unwrap_err();
        assert_eq!(err.path(), "$");
    }

    #[test]
    fn short_series_is_rejected() {
        let err = load_series::<f64>(&csv_doc(&[("8", "0.1"), ("9", "0.2")])).unwrap_err();
        assert!(matches!(err, LoadError::Series { source: crate::SeriesError::Length(2), .. }));
    }

    #[test]
    fn json_roundtrip_through_writer() {
        let s: ForecastSeries = load_series(&csv_doc(&[("8", "0.25"), ("9", "0.75"), ("10", "0.5")])).unwrap();
        let back: ForecastSeries = load_series(&series_to_json(&s, Some("mon")).to_string()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn loads_into_rationals() {
        let s: ForecastSeries<Rational> = load_series(&csv_doc(&[("8", "0"), ("9", "0.5"), ("10", "1")])).unwrap();
        assert_eq!(s.rates()[1].value(), Rational::new(1, 2));
    }
}
