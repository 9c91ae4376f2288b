//! Statistical sum-of-sinusoids model of a single time-correlated
//! Rayleigh fading gain under two-dimensional isotropic scattering.
//!
//! Each realization draws its own arrival angles and phases, so the
//! ensemble — not just one trace — carries the model's first- and
//! second-order statistics: every sample is zero-mean complex Gaussian in
//! the many-sinusoid limit with average power Ω, and the in-phase
//! autocorrelation approaches (Ω/2)·J₀(2π·f_max·τ).

use super::SimParams;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Phasor magnitudes drift by roundoff under repeated rotation; they are
/// snapped back to the unit circle this often.
const RENORM_INTERVAL: u32 = 4096;

/// Streaming generator for one complex branch gain.
///
/// The state is one unit phasor per sinusoid advanced by a fixed
/// per-sample rotation (the Doppler shift of its arrival angle), so each
/// sample costs one complex multiply-add per sinusoid and no
/// trigonometry.
#[derive(Debug, Clone)]
pub struct ClarkeProcess {
    amplitude: f64,
    phasor_re: Vec<f64>,
    phasor_im: Vec<f64>,
    step_re: Vec<f64>,
    step_im: Vec<f64>,
    since_renorm: u32,
}

impl ClarkeProcess {
    /// Set up a process with average power `omega_avg` and maximum Doppler
    /// shift `f_max` Hz, drawing angles and phases from the stream
    /// `stream_id` of the master seed in `sim`.
    pub fn new(omega_avg: f64, f_max: f64, sim: &SimParams, stream_id: u64) -> Result<Self> {
        if !(omega_avg.is_finite() && omega_avg > 0.0) || !(f_max.is_finite() && f_max > 0.0) {
            return Err(Error::Domain {
                routine: "clarke_process",
                message: format!(
                    "need omega_avg > 0 and f_max > 0, got {omega_avg} and {f_max}"
                ),
            });
        }
        if !(sim.sample_rate.is_finite() && sim.sample_rate >= 16.0 * f_max) {
            return Err(Error::InvalidConfig {
                message: format!(
                    "sample_rate {} is below 16x the Doppler rate {f_max}",
                    sim.sample_rate
                ),
            });
        }
        if sim.n_sinusoids == 0 {
            return Err(Error::InvalidConfig {
                message: "clarke process needs n_sinusoids >= 1".to_string(),
            });
        }
        let n = sim.n_sinusoids as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
        rng.set_stream(stream_id);
        let dt = sim.dt();
        let mut process = ClarkeProcess {
            amplitude: (omega_avg / n as f64).sqrt(),
            phasor_re: Vec::with_capacity(n),
            phasor_im: Vec::with_capacity(n),
            step_re: Vec::with_capacity(n),
            step_im: Vec::with_capacity(n),
            since_renorm: 0,
        };
        for _ in 0..n {
            let theta = TAU * rng.gen::<f64>();
            let phi = TAU * rng.gen::<f64>();
            let step = TAU * f_max * theta.cos() * dt;
            process.phasor_re.push(phi.cos());
            process.phasor_im.push(phi.sin());
            process.step_re.push(step.cos());
            process.step_im.push(step.sin());
        }
        Ok(process)
    }

    /// Produce the gain at the current sample and advance one interval.
    pub fn next_gain(&mut self) -> Complex64 {
        let mut sum_re = 0.0;
        let mut sum_im = 0.0;
        for i in 0..self.phasor_re.len() {
            let re = self.phasor_re[i];
            let im = self.phasor_im[i];
            sum_re += re;
            sum_im += im;
            self.phasor_re[i] = re * self.step_re[i] - im * self.step_im[i];
            self.phasor_im[i] = re * self.step_im[i] + im * self.step_re[i];
        }
        self.since_renorm += 1;
        if self.since_renorm >= RENORM_INTERVAL {
            self.since_renorm = 0;
            for i in 0..self.phasor_re.len() {
                let norm = (self.phasor_re[i] * self.phasor_re[i]
                    + self.phasor_im[i] * self.phasor_im[i])
                    .sqrt();
                self.phasor_re[i] /= norm;
                self.phasor_im[i] /= norm;
            }
        }
        Complex64::new(self.amplitude * sum_re, self.amplitude * sum_im)
    }
}

/// Collect a full gain trace of `sim.sample_count()` samples.
pub fn generate_clarke_process(
    omega_avg: f64,
    f_max: f64,
    sim: &SimParams,
    stream_id: u64,
) -> Result<Vec<Complex64>> {
    let mut process = ClarkeProcess::new(omega_avg, f_max, sim, stream_id)?;
    Ok((0..sim.sample_count()).map(|_| process.next_gain()).collect())
}
