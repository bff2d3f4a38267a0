use std::io::Read;
use std::path::{Path, PathBuf};

use plantchart_core::fixtures::{fixture, wednesday, DEVICES};
use plantchart_core::{load_series, DeviceProfile, EncodingMode, LeafPosition, Series};
use plantchart_render::{Canvas, ChartDimensions};

use crate::error::CliError;

pub const PROFILE_DIR_VAR: &str = "PLANTCHART_PROFILE_DIR";

/// Reads a series from a file, `-` for stdin, or a built-in fixture name.
/// `<device>-wednesday` names the three Wednesday variations as one day.
pub fn resolve_series(input: &str) -> Result<Series, CliError> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(load_series(&text)?);
    }
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{input}: {e}")))?;
        return load_series(&text).map_err(|e| CliError::input(format!("{input}: {e}")));
    }
    if let Some(f) = fixture(input) {
        return Ok(f.series()?);
    }
    if let Some(device) = input.strip_suffix("-wednesday").filter(|d| DEVICES.contains(d)) {
        return Ok(wednesday(device).expect("known device")?);
    }
    Err(CliError::input(format!("'{input}' is neither a readable file nor a fixture name")))
}

/// Built-in profile name, path to a profile JSON file, or the name of a
/// file in `$PLANTCHART_PROFILE_DIR`.
pub fn resolve_profile(name: &str) -> Result<DeviceProfile, CliError> {
    if let Some(p) = DeviceProfile::builtin(name) {
        return Ok(p);
    }
    let direct = PathBuf::from(name);
    let candidate = if direct.is_file() {
        Some(direct)
    } else {
        std::env::var_os(PROFILE_DIR_VAR)
            .map(|dir| PathBuf::from(dir).join(format!("{name}.json")))
            .filter(|p| p.is_file())
    };
    let Some(path) = candidate else {
        return Err(CliError::input(format!(
            "unknown profile '{name}' (built-in: {})",
            DeviceProfile::BUILTIN_NAMES.join(", ")
        )));
    };
    let text = std::fs::read_to_string(&path)?;
    let profile: DeviceProfile = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    profile.validate().map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(profile)
}

/// The graphical leaf display used absolute thresholding; every other
/// display is peak-relative.
pub fn default_mode(profile: &DeviceProfile) -> EncodingMode {
    if profile.name == "plantscreen" {
        EncodingMode::AbsoluteLinear
    } else {
        EncodingMode::PeakRelative
    }
}

pub fn parse_mode(s: &str) -> Result<EncodingMode, CliError> {
    s.parse().map_err(|_| CliError::input(format!("unknown mode '{s}' (relative, absolute, six-step)")))
}

/// Comma-separated positions such as `0,3,10`.
pub fn parse_positions(s: &str) -> Result<Vec<LeafPosition>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .ok()
                .and_then(|v| LeafPosition::new(v).ok())
                .ok_or_else(|| CliError::input(format!("bad position '{t}'")))
        })
        .collect()
}

/// A preset name or `height,min,max` in centimeters.
pub fn parse_dims(s: &str) -> Result<ChartDimensions, CliError> {
    if let Some(d) = ChartDimensions::preset(s) {
        return Ok(d);
    }
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::input(format!("bad dimensions '{s}'"))))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [h, lo, hi] => Ok(ChartDimensions::new(*h, *lo, *hi)?),
        _ => Err(CliError::input(format!("dimensions need a preset name or height,min,max, got '{s}'"))),
    }
}

/// `WIDTHxHEIGHT` in pixels.
pub fn parse_canvas(s: &str) -> Result<Canvas, CliError> {
    let bad = || CliError::input(format!("bad canvas '{s}', expected WIDTHxHEIGHT"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok(Canvas::new(w.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_and_days_resolve() {
        assert_eq!(resolve_series("plantform-monday").unwrap().len(), 10);
        assert_eq!(resolve_series("cairnform-wednesday").unwrap().len(), 10);
        assert!(matches!(resolve_series("no-such-thing"), Err(CliError::Input(_))));
    }

    #[test]
    fn small_parsers() {
        assert_eq!(parse_canvas("300x500").unwrap(), Canvas::new(300, 500));
        assert!(parse_canvas("300").is_err());
        assert_eq!(parse_dims("10,1,2").unwrap().chart_height, 10.0);
        assert!(parse_dims("10,2,1").is_err());
        assert_eq!(parse_positions("0, 5,10").unwrap().len(), 3);
        assert!(parse_positions("11").is_err());
        assert!(resolve_profile("nope").is_err());
    }
}
