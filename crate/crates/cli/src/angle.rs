//! Angle and range parsing. Angles are radians (`0.3141`) or multiples of pi
//! (`0.1pi`, `pi`, `-2pi`, `0.5π`).

use std::f64::consts::PI;

use nvqaoa_core::experiment::AxisRange;

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s = text.trim();
    let bad = || format!("invalid angle {text:?}");
    let multiple = s
        .strip_suffix("pi")
        .or_else(|| s.strip_suffix('π'))
        .map(|m| m.trim_end_matches('*').trim());
    let value = match multiple {
        Some("") | Some("+") => PI,
        Some("-") => -PI,
        Some(m) => m.parse::<f64>().map_err(|_| bad())? * PI,
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Formats an angle as a multiple of pi that [`parse_angle`] reads back.
pub fn format_pi(value: f64) -> String {
    format!("{:?}pi", value / PI)
}

/// `START:STOP:STEP`, or a single angle for a one-point range.
pub fn parse_range(text: &str) -> Result<AxisRange, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(AxisRange::point(parse_angle(single)?)),
        [start, stop, step] => AxisRange::new(parse_angle(start)?, parse_angle(stop)?, parse_angle(step)?)
            .map_err(|e| format!("range {text:?}: {e}")),
        _ => Err(format!("invalid range {text:?}, expected START:STOP:STEP")),
    }
}
