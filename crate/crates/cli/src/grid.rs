//! Inclusive `start:stop:step` threshold grids in NSIRth dB.

use crate::Failure;

/// Parse `start:stop:step` into an ascending inclusive grid. A bare number
/// denotes a single-point grid.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |msg: &str| Failure::usage(format!("range '{spec}': {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("expected numbers start:stop:step"))?;
    match nums.as_slice() {
        [single] if single.is_finite() => Ok(vec![*single]),
        [start, stop, step] => {
            if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                return Err(bad("values must be finite"));
            }
            if *step <= 0.0 {
                return Err(bad("step must be > 0"));
            }
            if stop < start {
                return Err(bad("stop must be >= start"));
            }
            // Tiny slop so an endpoint that lands on a multiple of the
            // step (up to rounding) stays on the grid.
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(bad("expected start:stop:step")),
    }
}
