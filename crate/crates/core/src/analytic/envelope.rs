//! Exact distribution of the sum of two independent Rayleigh envelopes —
//! the desired-signal envelope at the output of a dual-branch equal-gain
//! combiner. These are the closed-form building blocks behind the M = 2
//! statistics and the reference curves the CF-inversion routes are checked
//! against.

use crate::error::{Error, Result};
use crate::specfun::erf_fn;

fn validate(x: f64, omega_s: f64, routine: &'static str) -> Result<()> {
    if !x.is_finite() || !omega_s.is_finite() || omega_s <= 0.0 {
        return Err(Error::Domain {
            routine,
            message: format!("need finite x and omega_s > 0, got x={x}, omega_s={omega_s}"),
        });
    }
    Ok(())
}

/// CDF of X = X₁ + X₂ where X₁, X₂ are iid Rayleigh envelopes with mean
/// power `omega_s` each.
pub fn desired_envelope_cdf_m2(x: f64, omega_s: f64) -> Result<f64> {
    validate(x, omega_s, "desired_envelope_cdf_m2")?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let s2 = x * x / omega_s;
    let half = 0.5 * s2;
    let value = 1.0
        - (-s2).exp()
        - (0.5 * std::f64::consts::PI).sqrt() * s2.sqrt() * (-half).exp() * erf_fn(half.sqrt());
    Ok(value.clamp(0.0, 1.0))
}

/// PDF of X = X₁ + X₂ (derivative of [`desired_envelope_cdf_m2`]).
pub fn desired_envelope_pdf_m2(x: f64, omega_s: f64) -> Result<f64> {
    validate(x, omega_s, "desired_envelope_pdf_m2")?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let s2 = x * x / omega_s;
    let half = 0.5 * s2;
    let value = (x / omega_s) * (-s2).exp()
        + (0.5 * std::f64::consts::PI / omega_s).sqrt()
            * (s2 - 1.0)
            * (-half).exp()
            * erf_fn(half.sqrt());
    Ok(value.max(0.0))
}
