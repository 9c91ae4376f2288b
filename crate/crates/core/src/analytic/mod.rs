//! Analytic evaluation of the output-SIR statistics of an equal-gain
//! combiner facing Rayleigh-faded cochannel interference.
//!
//! Four independent routes compute the same three quantities — outage
//! probability, level-crossing rate, and average fade duration:
//!
//! * [`Method::Closed`] — elementary/incomplete-beta closed forms
//!   (M ∈ {1, 2} only).
//! * [`Method::Density`] — direct integration of the conditional
//!   envelope distributions (M ∈ {1, 2} only).
//! * [`Method::Quadrature`] — adaptive Gauss–Kronrod inversion of the
//!   product characteristic function (any M).
//! * [`Method::Series`] — Fourier-series sampling of the same product CF
//!   (any M).
//!
//! Agreement across routes is the correctness argument of this crate, so
//! they deliberately share as little code as possible beyond the branch
//! characteristic function itself.

mod closed;
mod config;
mod density;
mod envelope;
mod inversion;
mod series;

pub use config::{
    derivative_variances, derived_params, DerivativeVariances, DerivedParams, Scenario,
    SystemConfig,
};
pub use envelope::{desired_envelope_cdf_m2, desired_envelope_pdf_m2};
pub use series::BeaulieuParams;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Evaluation route for the analytic statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Conditional envelope-distribution integral (M ≤ 2).
    Density,
    /// Adaptive Gauss–Kronrod CF inversion (any M).
    Quadrature,
    /// Fourier-series CF sampling (any M).
    Series,
    /// Closed forms (M ≤ 2).
    Closed,
}

impl Method {
    /// All supported methods, in the order they appear in reports.
    pub const ALL: [Method; 4] = [
        Method::Density,
        Method::Quadrature,
        Method::Series,
        Method::Closed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Density => "density",
            Method::Quadrature => "quadrature",
            Method::Series => "series",
            Method::Closed => "closed",
        }
    }

    /// Whether the method supports the given diversity order.
    pub fn supports(&self, m_branches: u32) -> bool {
        match self {
            Method::Density | Method::Closed => m_branches <= 2,
            Method::Quadrature | Method::Series => true,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s.trim().to_ascii_lowercase().as_str() {
            "density" => Ok(Method::Density),
            "quadrature" => Ok(Method::Quadrature),
            "series" => Ok(Method::Series),
            "closed" => Ok(Method::Closed),
            other => Err(Error::InvalidConfig {
                message: format!(
                    "unknown method '{other}' (expected density, quadrature, series, or closed)"
                ),
            }),
        }
    }
}

/// Numerical knobs for the evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    /// Adaptive-quadrature controls (density and quadrature methods).
    pub quadrature: QuadratureSpec,
    /// Series truncation controls (series method).
    pub series: BeaulieuParams,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            quadrature: QuadratureSpec::default(),
            series: BeaulieuParams::default(),
        }
    }
}

/// A single statistic plus the work spent computing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodEval {
    pub value: f64,
    /// Integrand evaluations (quadrature routes), series terms (series
    /// route), or 0 (closed forms).
    pub evaluations: usize,
}

/// Work counters for an assembled statistics point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub op_evaluations: usize,
    pub lcr_evaluations: usize,
}

/// All first- and second-order statistics at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatPoint {
    /// Power threshold z (linear).
    pub z: f64,
    /// Normalized SIR threshold 10·log₁₀(γ/z) in dB — the mean SIR in
    /// units of the threshold, so outage falls as it grows.
    pub nsirth_db: f64,
    /// Outage probability F_Z(z).
    pub op: f64,
    /// Level-crossing rate normalized by the desired maximum Doppler,
    /// N_Z / f_m0.
    pub lcr_norm: f64,
    /// Average fade duration normalized by the desired maximum Doppler,
    /// T_Z · f_m0 (NaN where the crossing rate vanishes but the outage
    /// does not).
    pub afd_norm: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

fn validate_threshold(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain {
            routine: "statistics",
            message: format!("threshold z must be finite and >= 0, got {z}"),
        });
    }
    Ok(())
}

/// Normalized slope prefactor √(π/2)·√(M + ρ²·r): the crossing-rate
/// expressions of every route share it.
pub(crate) fn lcr_prefactor_norm(config: &SystemConfig, z: f64) -> Result<f64> {
    let v = derivative_variances(config)?;
    let pref_abs = ((v.sigma2_xdot + z * v.sigma2_ydot) / (2.0 * PI)).sqrt();
    Ok(pref_abs / (config.f_m0 * config.omega_s.sqrt()))
}

fn op_norm(m: u32, alpha: f64, r: f64, method: Method, params: &EvalParams) -> Result<MethodEval> {
    let (value, evaluations) = match method {
        Method::Closed => (closed::op_closed_norm(m, alpha, r)?, 0),
        Method::Density => density::op_density_norm(m, alpha, r, &params.quadrature)?,
        Method::Quadrature => inversion::op_quadrature_norm(m, alpha, r, &params.quadrature)?,
        Method::Series => series::op_series_norm(m, alpha, r, &params.series)?,
    };
    Ok(MethodEval { value, evaluations })
}

fn lcr_norm_dispatch(
    m: u32,
    alpha: f64,
    r: f64,
    pref: f64,
    method: Method,
    params: &EvalParams,
) -> Result<MethodEval> {
    let (value, evaluations) = match method {
        Method::Closed => (closed::lcr_closed_norm(m, alpha, r, pref)?, 0),
        Method::Density => density::lcr_density_norm(m, alpha, r, pref, &params.quadrature)?,
        Method::Quadrature => {
            inversion::lcr_quadrature_norm(m, alpha, r, pref, &params.quadrature)?
        }
        Method::Series => series::lcr_series_norm(m, alpha, r, pref, &params.series)?,
    };
    Ok(MethodEval { value, evaluations })
}

/// Outage probability P[Z ≤ z].
pub fn outage_probability(
    z: f64,
    config: &SystemConfig,
    method: Method,
    params: &EvalParams,
) -> Result<MethodEval> {
    validate_threshold(z)?;
    let derived = derived_params(config)?;
    if z == 0.0 {
        return Ok(MethodEval {
            value: 0.0,
            evaluations: 0,
        });
    }
    op_norm(
        config.m_branches,
        derived.alpha,
        z / derived.beta,
        method,
        params,
    )
}

/// Level-crossing rate N_Z(z) in crossings per second.
pub fn level_crossing_rate(
    z: f64,
    config: &SystemConfig,
    method: Method,
    params: &EvalParams,
) -> Result<MethodEval> {
    validate_threshold(z)?;
    let derived = derived_params(config)?;
    if z == 0.0 {
        return Ok(MethodEval {
            value: 0.0,
            evaluations: 0,
        });
    }
    let pref = lcr_prefactor_norm(config, z)?;
    let eval = lcr_norm_dispatch(
        config.m_branches,
        derived.alpha,
        z / derived.beta,
        pref,
        method,
        params,
    )?;
    Ok(MethodEval {
        value: config.f_m0 * eval.value,
        evaluations: eval.evaluations,
    })
}

/// Average fade duration T_Z(z) = F_Z(z) / N_Z(z) in seconds.
///
/// Returns zero at z = 0 (no fades below an empty threshold) and
/// [`Error::AfdUndefined`] where the crossing rate underflows to zero
/// while the outage probability does not.
pub fn average_fade_duration(
    z: f64,
    config: &SystemConfig,
    method: Method,
    params: &EvalParams,
) -> Result<MethodEval> {
    validate_threshold(z)?;
    if z == 0.0 {
        return Ok(MethodEval {
            value: 0.0,
            evaluations: 0,
        });
    }
    let op = outage_probability(z, config, method, params)?;
    let lcr = level_crossing_rate(z, config, method, params)?;
    if lcr.value == 0.0 {
        if op.value == 0.0 {
            return Ok(MethodEval {
                value: 0.0,
                evaluations: op.evaluations + lcr.evaluations,
            });
        }
        return Err(Error::AfdUndefined { z });
    }
    Ok(MethodEval {
        value: op.value / lcr.value,
        evaluations: op.evaluations + lcr.evaluations,
    })
}

/// Assemble every statistic at one threshold into a report row.
///
/// The outage probability is clamped to [0, 1] (the raw value from
/// [`outage_probability`] can stray a few ULPs outside under roundoff),
/// and an undefined fade duration becomes NaN rather than an error so
/// sweeps can proceed past it.
pub fn stat_point(
    z: f64,
    config: &SystemConfig,
    method: Method,
    params: &EvalParams,
) -> Result<StatPoint> {
    validate_threshold(z)?;
    let derived = derived_params(config)?;
    let gamma = derived.gamma;
    let nsirth_db = 10.0 * (gamma / z).log10();
    if z == 0.0 {
        return Ok(StatPoint {
            z,
            nsirth_db,
            op: 0.0,
            lcr_norm: 0.0,
            afd_norm: 0.0,
            method,
            diagnostics: Diagnostics::default(),
        });
    }
    let op = outage_probability(z, config, method, params)?;
    let lcr = level_crossing_rate(z, config, method, params)?;
    let lcr_norm = lcr.value / config.f_m0;
    let op_clamped = op.value.clamp(0.0, 1.0);
    let afd_norm = if lcr_norm == 0.0 {
        if op_clamped == 0.0 {
            0.0
        } else {
            f64::NAN
        }
    } else {
        op_clamped / lcr_norm
    };
    Ok(StatPoint {
        z,
        nsirth_db,
        op: op_clamped,
        lcr_norm,
        afd_norm,
        method,
        diagnostics: Diagnostics {
            op_evaluations: op.evaluations,
            lcr_evaluations: lcr.evaluations,
        },
    })
}

/// Threshold z corresponding to a normalized SIR threshold in dB:
/// z = γ · 10^(−nsirth_db / 10), since NSIRth = γ/z.
pub fn z_from_nsirth_db(nsirth_db: f64, config: &SystemConfig) -> Result<f64> {
    if !nsirth_db.is_finite() {
        return Err(Error::Domain {
            routine: "z_from_nsirth_db",
            message: format!("normalized threshold must be finite, got {nsirth_db}"),
        });
    }
    let derived = derived_params(config)?;
    Ok(derived.gamma * 10f64.powf(-nsirth_db / 10.0))
}
