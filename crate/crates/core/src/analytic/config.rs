//! System description and the derived parameters every statistic is
//! expressed in.

use crate::error::{Error, Result};

/// How the N cochannel interferers combine at the array output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Interferer phases decorrelate across branches: the composite
    /// interference envelope behaves like M·N equal-power components.
    Incoherent,
    /// Each interferer arrives cophased across branches: N components, each
    /// amplified M-fold in power.
    Coherent,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scenario::Incoherent => write!(f, "incoherent"),
            Scenario::Coherent => write!(f, "coherent"),
        }
    }
}

/// Physical description of the diversity receiver and the interference
/// field. Powers are mean envelope powers per branch; Doppler spreads are
/// maximum Doppler frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Number of equal-gain combining branches M ≥ 1.
    pub m_branches: u32,
    /// Number of active cochannel interferers N ≥ 1.
    pub n_interferers: u32,
    /// Mean power of the desired signal per branch, Ω_S > 0.
    pub omega_s: f64,
    /// Mean power of each interferer per branch, Ω_I > 0.
    pub omega_i: f64,
    /// Maximum Doppler frequency of the desired signal, f_m0 > 0.
    pub f_m0: f64,
    /// Maximum Doppler frequency of the interferers, f_mi > 0.
    pub f_mi: f64,
    /// Interference combining model.
    pub scenario: Scenario,
}

impl SystemConfig {
    /// A convenience baseline: unit powers, equal unit Doppler spreads.
    pub fn new(m_branches: u32, n_interferers: u32, scenario: Scenario) -> Self {
        SystemConfig {
            m_branches,
            n_interferers,
            omega_s: 1.0,
            omega_i: 1.0,
            f_m0: 1.0,
            f_mi: 1.0,
            scenario,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_branches == 0 {
            return Err(Error::InvalidConfig {
                message: "m_branches must be at least 1".into(),
            });
        }
        if self.n_interferers == 0 {
            return Err(Error::InvalidConfig {
                message: "n_interferers must be at least 1".into(),
            });
        }
        for (name, v) in [
            ("omega_s", self.omega_s),
            ("omega_i", self.omega_i),
            ("f_m0", self.f_m0),
            ("f_mi", self.f_mi),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidConfig {
                    message: format!("{name} must be finite and positive, got {v}"),
                });
            }
        }
        Ok(())
    }

    /// Doppler spread ratio ρ = f_mi / f_m0.
    pub fn doppler_ratio(&self) -> f64 {
        self.f_mi / self.f_m0
    }
}

/// Parameters of the equivalent single-envelope interference model.
///
/// The composite interference envelope has the density of a sum of `alpha`
/// equal-power complex Gaussian components, and every normalized statistic
/// of the SIR depends on the threshold only through `r = z / beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Shape parameter of the composite interference envelope.
    pub alpha: f64,
    /// Threshold normalizer: r = z / beta.
    pub beta: f64,
    /// Per-branch mean power ratio γ = Ω_S / Ω_I.
    pub gamma: f64,
}

/// Map a system configuration onto the equivalent interference model.
pub fn derived_params(config: &SystemConfig) -> Result<DerivedParams> {
    config.validate()?;
    let m = config.m_branches as f64;
    let n = config.n_interferers as f64;
    let gamma = config.omega_s / config.omega_i;
    let (alpha, beta) = match config.scenario {
        Scenario::Incoherent => (m * n, gamma),
        Scenario::Coherent => (n, gamma / m),
    };
    Ok(DerivedParams { alpha, beta, gamma })
}

/// Variances of the time derivatives of the desired-sum and interference
/// envelopes under isotropic scattering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeVariances {
    /// Var{Ẋ} for the sum of M desired-signal envelopes.
    pub sigma2_xdot: f64,
    /// Var{Ẏ} for the composite interference envelope.
    pub sigma2_ydot: f64,
}

/// Derivative variances; both scenarios give the same `sigma2_xdot`, while
/// `sigma2_ydot` follows the composite envelope's mean power.
pub fn derivative_variances(config: &SystemConfig) -> Result<DerivativeVariances> {
    config.validate()?;
    let m = config.m_branches as f64;
    let pi = std::f64::consts::PI;
    let sigma2_xdot = (pi * config.f_m0).powi(2) * m * config.omega_s;
    let interference_power = match config.scenario {
        Scenario::Incoherent => config.omega_i,
        Scenario::Coherent => m * config.omega_i,
    };
    let sigma2_ydot = (pi * config.f_mi).powi(2) * interference_power;
    Ok(DerivativeVariances {
        sigma2_xdot,
        sigma2_ydot,
    })
}
