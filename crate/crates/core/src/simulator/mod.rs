//! Seeded Monte Carlo validation path: time-correlated Rayleigh branch
//! gains (Clarke's two-dimensional isotropic scattering model), equal-gain
//! combining under both interference scenarios, and empirical measurement
//! of the same outage/crossing/fade-duration statistics the analytic
//! routes compute.
//!
//! Everything is deterministic: one master seed plus a counter-based
//! stream split per (trial, signal, branch) reproduces traces
//! byte-for-byte regardless of thread schedule.

mod clarke;
mod stats;
mod trace;

pub use clarke::{generate_clarke_process, ClarkeProcess};
pub use stats::{
    empirical_stats, validate_against_analytic, EmpiricalStats, ThresholdValidation,
    ValidationReport,
};
pub use trace::{egc_sir_trace, egc_sir_trace_trial, FadingTrace};

use crate::analytic::SystemConfig;
use crate::error::{Error, Result};

/// Master seed used when the caller does not provide one.
pub const DEFAULT_SEED: u64 = 1;

/// Sampling controls for the fading simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Absolute sampling rate in Hz.
    pub sample_rate: f64,
    /// Trace length in seconds.
    pub duration: f64,
    /// Sinusoids per Clarke process.
    pub n_sinusoids: u32,
    /// Master seed; every random stream in a run derives from it.
    pub seed: u64,
    /// Independent trace replications (for standard-error estimates).
    pub trials: u32,
}

impl SimParams {
    /// Defaults scaled to a configuration's desired-signal Doppler:
    /// 64 samples per Doppler period for 5000 periods, 256 sinusoids,
    /// a single trial.
    pub fn for_config(config: &SystemConfig) -> SimParams {
        SimParams {
            sample_rate: 64.0 * config.f_m0,
            duration: 5000.0 / config.f_m0,
            n_sinusoids: 256,
            seed: DEFAULT_SEED,
            trials: 1,
        }
    }

    /// Sample interval in seconds.
    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    /// Number of samples in one trace.
    pub fn sample_count(&self) -> usize {
        (self.duration * self.sample_rate).floor() as usize
    }

    /// Check the parameters against a configuration. The sampling rate
    /// must leave a Nyquist margin over the fastest fading process —
    /// crossing detection by consecutive-sample comparison needs several
    /// samples per fade.
    pub fn validate(&self, config: &SystemConfig) -> Result<()> {
        config.validate()?;
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0)
            || !(self.duration.is_finite() && self.duration > 0.0)
        {
            return Err(Error::InvalidConfig {
                message: format!(
                    "simulation needs sample_rate > 0 and duration > 0, got {} and {}",
                    self.sample_rate, self.duration
                ),
            });
        }
        if self.n_sinusoids == 0 || self.trials == 0 {
            return Err(Error::InvalidConfig {
                message: "simulation needs n_sinusoids >= 1 and trials >= 1".to_string(),
            });
        }
        let fastest = config.f_m0.max(config.f_mi);
        if self.sample_rate < 16.0 * fastest {
            return Err(Error::InvalidConfig {
                message: format!(
                    "sample_rate {} is below 16x the fastest Doppler rate {fastest}",
                    self.sample_rate
                ),
            });
        }
        if self.sample_count() < 2 {
            return Err(Error::InvalidConfig {
                message: format!(
                    "duration {} at rate {} yields fewer than 2 samples",
                    self.duration, self.sample_rate
                ),
            });
        }
        Ok(())
    }
}

/// Stream identifier for the gain process of signal `i` (0 = desired,
/// 1..=N = interferers) on branch `k` within a trial: trials occupy the
/// high half of the stream word, sources the low half.
pub(crate) fn stream_id(config: &SystemConfig, trial: u32, signal: u32, branch: u32) -> u64 {
    let source = signal * config.m_branches + branch;
    ((trial as u64) << 32) | source as u64
}
