//! Fourier-series evaluation of the outage probability and crossing rate.
//!
//! Both statistics follow from sampling the product characteristic function
//! P(u) = Φ_X(u)^M · Φ_Y(-u√r) at the odd harmonics u_n = (2n - 1)·ω₀ of a
//! period-T square wave:
//!
//!   F_Z   = 1/2 - (2/π) Σ_n Im{P(u_n)} / (2n - 1)
//!   N_Z/f = pref · (4/T) Σ_n Re{P(u_n)}
//!
//! The truncation point L is the accuracy knob. [`BeaulieuParams::tuned`]
//! picks L from a conservative envelope bound on |P| so the discarded tail
//! stays below a requested absolute error.

use crate::analytic::{derived_params, lcr_prefactor_norm, SystemConfig};
use crate::charfun::{complex_powi, BranchCf};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Default square-wave period. The period controls the spacing of the
/// aliased copies of the CDF; at T = 80 the aliasing error sits far below
/// every tolerance used in this crate, so only L needs tuning.
pub const DEFAULT_PERIOD: f64 = 80.0;

/// Default number of series terms; adequate for mid-range thresholds at
/// ~1e-5 absolute accuracy.
pub const DEFAULT_TERMS: usize = 200;

/// Hard ceiling on tuned term counts (guards against absurd targets).
const MAX_TUNED_TERMS: usize = 50_000_000;

/// Truncation parameters for the series route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeaulieuParams {
    /// Square-wave period T of the underlying Fourier expansion.
    pub t_period: f64,
    /// Number of retained odd harmonics L.
    pub l_terms: usize,
}

impl Default for BeaulieuParams {
    fn default() -> Self {
        BeaulieuParams {
            t_period: DEFAULT_PERIOD,
            l_terms: DEFAULT_TERMS,
        }
    }
}

impl BeaulieuParams {
    /// Fundamental frequency ω₀ = 2π/T.
    pub fn omega0(&self) -> f64 {
        2.0 * PI / self.t_period
    }

    fn validate(&self) -> Result<()> {
        if !self.t_period.is_finite() || self.t_period <= 0.0 || self.l_terms == 0 {
            return Err(Error::InvalidConfig {
                message: format!(
                    "series parameters need t_period > 0 and l_terms > 0, got T={}, L={}",
                    self.t_period, self.l_terms
                ),
            });
        }
        Ok(())
    }

    /// Choose (T, L) so that both series stay within `target_abs` of the
    /// exact statistics at the given operating point.
    ///
    /// Two error sources are controlled independently:
    ///
    /// * **Wrap-around.** The series reconstructs the distribution of
    ///   D = X - √r·Y periodized with period T; probability mass beyond
    ///   ±T/2 lands on the wrong branch of the square wave. T is sized
    ///   from sub-Gaussian tail radii of both envelopes, which is why it
    ///   must grow like √r at high thresholds — a fixed period is wrong
    ///   there no matter how many terms are summed.
    /// * **Truncation.** The discarded harmonics beyond u₀ = (2L-1)ω₀ are
    ///   bounded through the CF envelope |Φ(u, 1, α)| ≤ min(1, 4/u²) on
    ///   every factor.
    pub fn tuned(config: &SystemConfig, z: f64, target_abs: f64) -> Result<BeaulieuParams> {
        if !z.is_finite() || z < 0.0 || !target_abs.is_finite() || target_abs <= 0.0 {
            return Err(Error::InvalidConfig {
                message: format!(
                    "tuned series parameters need z >= 0 and target_abs > 0, got z={z}, target={target_abs}"
                ),
            });
        }
        let base = BeaulieuParams::default();
        let derived = derived_params(config)?;
        let r = z / derived.beta;
        if r == 0.0 {
            return Ok(base);
        }
        let m = config.m_branches;
        let mf = m as f64;
        let alpha = derived.alpha;
        let pref = lcr_prefactor_norm(config, z)?;

        // Period: half of it must hold the desired sum (union bound over
        // branches, P[X > x] ≤ M·e^{-(x/M)²}) plus the scaled interference
        // aggregate (P[Y > √α + s] ≲ e^{-s²} up to polynomial factors).
        let eps = (0.25 * target_abs).min(1e-6);
        let x_radius = mf * (4.0 * mf / eps).ln().sqrt();
        let y_radius = alpha.sqrt() + (4.0 / eps).ln().sqrt();
        let t_period = 2.0 * (x_radius + r.sqrt() * y_radius);
        let omega0 = 2.0 * PI / t_period;

        // Smallest u₀ with tail(u₀) ≤ target for each statistic; the series
        // tail beyond u₀ is bounded by (1/π)∫|P| (crossing rate, scaled by
        // pref) and (1/π)∫|P|/u (outage).
        let u0_lcr = solve_tail(|u0| pref / PI * tail_integral(m, r, u0, 0), target_abs);
        let u0_op = solve_tail(|u0| tail_integral(m, r, u0, 1) / PI, target_abs);
        let u0 = u0_lcr.max(u0_op);

        let l = ((u0 / omega0 + 1.0) / 2.0).ceil() as usize;
        Ok(BeaulieuParams {
            t_period,
            l_terms: l.clamp(base.l_terms, MAX_TUNED_TERMS),
        })
    }
}

/// ∫_{u₀}^∞ min(1, 4/u²)^m · min(1, 4/(u²r)) · u^{-p} du with p ∈ {0, 1},
/// evaluated exactly as a piecewise power-law integral.
fn tail_integral(m: u32, r: f64, u0: f64, p: i32) -> f64 {
    let b_desired = 2.0;
    let b_interf = 2.0 / r.sqrt();
    let mut cuts = vec![u0];
    for b in [b_desired, b_interf] {
        if b > u0 {
            cuts.push(b);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut total = 0.0;
    for (i, &lo) in cuts.iter().enumerate() {
        let hi = cuts.get(i + 1).copied();
        // Midpoint (or the left edge for the last, unbounded segment)
        // decides which factors are in their algebraic tail.
        let probe = hi.map_or(lo * 2.0, |h| 0.5 * (lo + h)).max(lo * 1.000_001);
        let mut coef = 1.0f64;
        let mut power = p;
        if probe > b_desired {
            coef *= 4.0f64.powi(m as i32);
            power += 2 * m as i32;
        }
        if probe > b_interf {
            coef *= 4.0 / r;
            power += 2;
        }
        total += match hi {
            Some(h) => {
                if power == 1 {
                    coef * (h / lo).ln()
                } else {
                    coef / (1.0 - power as f64)
                        * (h.powi(1 - power) - lo.powi(1 - power))
                }
            }
            // Unbounded tail: both factors active, so power ≥ 2m + 2 ≥ 4.
            None => coef / (power as f64 - 1.0) * lo.powi(1 - power),
        };
    }
    total
}

/// Smallest u₀ (log-bisection) with tail(u₀) ≤ target.
fn solve_tail<F: Fn(f64) -> f64>(tail: F, target: f64) -> f64 {
    let mut lo = 1e-3f64;
    let mut hi = 1e3f64;
    // Grow the bracket until the tail is small enough at `hi`.
    while tail(hi) > target && hi < 1e15 {
        hi *= 10.0;
    }
    if tail(lo) <= target {
        return lo;
    }
    for _ in 0..200 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

struct SeriesTerms {
    desired: BranchCf,
    interference: BranchCf,
    m: u32,
    sqrt_r: f64,
    omega0: f64,
}

impl SeriesTerms {
    fn new(m: u32, alpha: f64, r: f64, params: &BeaulieuParams) -> Result<SeriesTerms> {
        params.validate()?;
        Ok(SeriesTerms {
            desired: BranchCf::new(1.0, 1.0)?,
            interference: BranchCf::new(1.0, alpha)?,
            m,
            sqrt_r: r.sqrt(),
            omega0: params.omega0(),
        })
    }

    /// P(u_n) at the n-th odd harmonic (n starting at 1).
    fn product(&self, n: usize) -> Result<num_complex::Complex64> {
        let u = (2 * n - 1) as f64 * self.omega0;
        let px = complex_powi(self.desired.eval(u)?, self.m);
        let py = self.interference.eval(-u * self.sqrt_r)?;
        Ok(px * py)
    }
}

/// Kahan-compensated accumulator.
#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Guard against silently summing a tail that has not started to decay:
/// compare the mean magnitude of the last few percent of terms with the
/// first few percent. Keeps only a ring buffer, so tuned runs with very
/// large L stay O(1) in memory.
struct DecayMonitor {
    window: usize,
    total: usize,
    count: usize,
    head_sum: f64,
    ring: Vec<f64>,
}

impl DecayMonitor {
    fn new(l_terms: usize) -> DecayMonitor {
        let window = (l_terms / 20).clamp(5, 10_000);
        DecayMonitor {
            window,
            total: l_terms,
            count: 0,
            head_sum: 0.0,
            ring: vec![0.0; window],
        }
    }

    fn push(&mut self, magnitude: f64) {
        if self.count < self.window {
            self.head_sum += magnitude;
        }
        self.ring[self.count % self.window] = magnitude;
        self.count += 1;
    }

    fn finish(&self) -> Result<()> {
        if self.total < 40 || self.count < 2 * self.window {
            return Ok(());
        }
        let head = self.head_sum / self.window as f64;
        let tail = self.ring.iter().sum::<f64>() / self.window as f64;
        if head > 0.0 && tail > 0.1 * head {
            return Err(Error::SeriesDiverged { head, tail });
        }
        Ok(())
    }
}

/// Outage probability via the truncated Fourier series.
pub(crate) fn op_series_norm(
    m: u32,
    alpha: f64,
    r: f64,
    params: &BeaulieuParams,
) -> Result<(f64, usize)> {
    let terms = SeriesTerms::new(m, alpha, r, params)?;
    let mut acc = Kahan::default();
    let mut monitor = DecayMonitor::new(params.l_terms);
    for n in 1..=params.l_terms {
        let term = terms.product(n)?.im / (2 * n - 1) as f64;
        monitor.push(term.abs());
        acc.add(term);
    }
    monitor.finish()?;
    Ok((0.5 - (2.0 / PI) * acc.sum, params.l_terms))
}

/// Normalized level-crossing rate via the truncated Fourier series.
pub(crate) fn lcr_series_norm(
    m: u32,
    alpha: f64,
    r: f64,
    pref_norm: f64,
    params: &BeaulieuParams,
) -> Result<(f64, usize)> {
    let terms = SeriesTerms::new(m, alpha, r, params)?;
    let mut acc = Kahan::default();
    let mut monitor = DecayMonitor::new(params.l_terms);
    for n in 1..=params.l_terms {
        let term = terms.product(n)?.re;
        monitor.push(term.abs());
        acc.add(term);
    }
    monitor.finish()?;
    let value = pref_norm * (4.0 / params.t_period) * acc.sum;
    Ok((value, params.l_terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::closed::{lcr_closed_norm, op_closed_norm};
    use crate::analytic::Scenario;

    fn assert_abs(value: f64, expected: f64, tol: f64) {
        let err = (value - expected).abs();
        assert!(
            err <= tol,
            "value {value:.17e} vs expected {expected:.17e}: abs err {err:e} > {tol:e}"
        );
    }

    fn pref(m: u32, r: f64) -> f64 {
        (0.5 * std::f64::consts::PI).sqrt() * (m as f64 + r).sqrt()
    }

    #[test]
    fn matches_reference_sums_at_default_truncation() {
        // Independently computed sums of the same truncated series
        // (T = 80, L = 200), so the tolerance here is only roundoff.
        let params = BeaulieuParams::default();
        let (op, used) = op_series_norm(2, 2.0, 1.0, &params).unwrap();
        assert_eq!(used, 200);
        assert_abs(op, 0.298_466_737_307_309_128, 1e-9);
        let (lcr, _) = lcr_series_norm(2, 2.0, 1.0, pref(2, 1.0), &params).unwrap();
        assert_abs(lcr, 0.957_282_997_790_281_643, 1e-9);
    }

    #[test]
    fn matches_closed_forms_with_tuned_truncation() {
        for &(m, n, scenario, z) in &[
            (1u32, 1u32, Scenario::Incoherent, 1.0),
            (1, 5, Scenario::Incoherent, 0.1),
            (2, 1, Scenario::Incoherent, 1.0),
            (2, 1, Scenario::Coherent, 1.0),
            (2, 3, Scenario::Coherent, 10.0),
            // High thresholds need the stretched period: with the fixed
            // default T = 80 these two would alias by O(0.1).
            (1, 1, Scenario::Incoherent, 1000.0),
            (2, 2, Scenario::Incoherent, 1000.0),
        ] {
            let config = SystemConfig::new(m, n, scenario);
            let derived = derived_params(&config).unwrap();
            let r = z / derived.beta;
            let alpha = derived.alpha;
            let params = BeaulieuParams::tuned(&config, z, 1e-9).unwrap();

            let (op, _) = op_series_norm(m, alpha, r, &params).unwrap();
            assert_abs(op, op_closed_norm(m, alpha, r).unwrap(), 5e-9);

            let p = pref(m, r);
            let (lcr, _) = lcr_series_norm(m, alpha, r, p, &params).unwrap();
            assert_abs(lcr, lcr_closed_norm(m, alpha, r, p).unwrap(), 5e-9);
        }
    }

    #[test]
    fn tuned_truncation_tracks_difficulty() {
        let config = SystemConfig::new(1, 1, Scenario::Incoherent);
        let mid = BeaulieuParams::tuned(&config, 1.0, 1e-8).unwrap();
        assert!(mid.l_terms >= DEFAULT_TERMS);
        // Tightening the target can only grow the truncation point.
        let tight = BeaulieuParams::tuned(&config, 1.0, 1e-10).unwrap();
        assert!(tight.l_terms > mid.l_terms);
        // The expensive corner is the deep lower tail (tiny r): the
        // interference factor stays ≈ 1 far out in u, so the envelope
        // bound forces a much longer sum than at mid thresholds.
        let deep = BeaulieuParams::tuned(&config, 1e-6, 1e-9).unwrap();
        assert!(deep.l_terms > 10 * mid.l_terms);
        // High thresholds spread D = X - √r·Y out like √r, so the period
        // must stretch with it; the harmonic count grows too, but stays
        // well short of the deep-tail case because the interference
        // factor suppresses the spectrum like 1/(u²r).
        let high = BeaulieuParams::tuned(&config, 1000.0, 1e-8).unwrap();
        assert!(high.t_period > 5.0 * mid.t_period);
        assert!(high.l_terms > mid.l_terms);
        assert!(high.l_terms < deep.l_terms);
    }

    #[test]
    fn tail_integral_pure_power_law() {
        // Beyond both breakpoints the integrand is 4^m · (4/r) · u^{-2m-2}.
        let val = tail_integral(2, 1.0, 10.0, 0);
        let exact = 16.0 * 4.0 / (5.0 * 1e5);
        assert_abs(val, exact, 1e-18);
        let val = tail_integral(1, 4.0, 10.0, 1);
        let exact = 4.0 / 4.0 * 4.0 / (4.0 * 1e4);
        assert_abs(val, exact, 1e-19);
    }

    #[test]
    fn tail_integral_decreases_in_u0() {
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let u0 = 10f64.powf(-2.0 + 4.0 * k as f64 / 40.0);
            let v = tail_integral(2, 0.5, u0, 0);
            assert!(v.is_finite() && v > 0.0);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn detects_undecayed_tail() {
        // Absurdly short period → harmonics never leave the CF bulk, so the
        // truncated tail is still O(1) and the guard must fire.
        let params = BeaulieuParams {
            t_period: 4000.0,
            l_terms: 50,
        };
        let result = lcr_series_norm(2, 2.0, 1.0, pref(2, 1.0), &params);
        assert!(matches!(result, Err(Error::SeriesDiverged { .. })));
    }

    #[test]
    fn rejects_bad_parameters() {
        let params = BeaulieuParams {
            t_period: 0.0,
            l_terms: 10,
        };
        assert!(op_series_norm(1, 1.0, 1.0, &params).is_err());
        let params = BeaulieuParams {
            t_period: 80.0,
            l_terms: 0,
        };
        assert!(op_series_norm(1, 1.0, 1.0, &params).is_err());
    }
}
