//! Characteristic functions of the envelope distributions.
//!
//! The envelope of a sum of `alpha` equal-power complex Gaussian components
//! with total mean power Ω has density
//!
//!   f(u) = 2 u^{2α-1} e^{-u²/Ω} / (Γ(α) Ω^α),   u ≥ 0,
//!
//! whose characteristic function is expressible through two Kummer
//! functions:
//!
//!   Φ(ω; Ω, α) = ₁F₁(α; ½; -ω²Ω/4)
//!              + j ω √Ω  Γ(α+½)/Γ(α)  ₁F₁(α+½; 3/2; -ω²Ω/4).
//!
//! The desired-signal sum at the combiner output is a sum of M independent
//! Rayleigh envelopes (α = 1 each), so its CF is the M-th power of a single
//! branch CF. The composite interference envelope maps onto a single
//! equivalent (Ω, α) pair depending on the combining scenario.

use num_complex::Complex64;

use crate::analytic::{Scenario, SystemConfig};
use crate::error::{Error, Result};
use crate::specfun::{gamma_half_ratio, kummer_1f1};

/// A characteristic function value; `re`/`im` accessible as fields.
pub type CfValue = Complex64;

/// Evaluator for the envelope CF at fixed (Ω, α), caching the gamma ratio.
#[derive(Debug, Clone)]
pub struct BranchCf {
    omega_avg: f64,
    alpha: f64,
    half_ratio: f64,
}

impl BranchCf {
    pub fn new(omega_avg: f64, alpha: f64) -> Result<Self> {
        if !omega_avg.is_finite() || omega_avg <= 0.0 || !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Domain {
                routine: "branch_cf",
                message: format!("need omega_avg > 0 and alpha > 0, got {omega_avg}, {alpha}"),
            });
        }
        Ok(BranchCf {
            omega_avg,
            alpha,
            half_ratio: gamma_half_ratio(alpha)?,
        })
    }

    /// Mean power Ω of the envelope this CF describes.
    pub fn omega_avg(&self) -> f64 {
        self.omega_avg
    }

    /// Shape parameter α of the envelope this CF describes.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Φ(ω) for any real ω.
    pub fn eval(&self, omega: f64) -> Result<CfValue> {
        if !omega.is_finite() {
            return Err(Error::Domain {
                routine: "branch_cf",
                message: format!("omega must be finite, got {omega}"),
            });
        }
        let x = -omega * omega * self.omega_avg / 4.0;
        let re = kummer_1f1(self.alpha, 0.5, x)?;
        if !re.converged {
            return Err(Error::NotConverged {
                routine: "branch_cf",
                terms_used: re.terms_used,
            });
        }
        let im = kummer_1f1(self.alpha + 0.5, 1.5, x)?;
        if !im.converged {
            return Err(Error::NotConverged {
                routine: "branch_cf",
                terms_used: im.terms_used,
            });
        }
        let im_factor = omega * self.omega_avg.sqrt() * self.half_ratio;
        Ok(CfValue::new(re.value, im_factor * im.value))
    }
}

/// One-shot CF evaluation; prefer [`BranchCf`] for repeated calls.
pub fn branch_cf(omega: f64, omega_avg: f64, alpha: f64) -> Result<CfValue> {
    BranchCf::new(omega_avg, alpha)?.eval(omega)
}

/// The two CF factors whose product the SIR statistics integrate: the
/// desired-signal sum (M-th power of a Rayleigh branch CF) and the
/// composite interference envelope.
#[derive(Debug, Clone)]
pub struct SystemCfs {
    desired_branch: BranchCf,
    m_branches: u32,
    interference: BranchCf,
}

impl SystemCfs {
    /// CF of the sum of the M desired-signal branch envelopes.
    pub fn desired_sum(&self, omega: f64) -> Result<CfValue> {
        Ok(complex_powi(self.desired_branch.eval(omega)?, self.m_branches))
    }

    /// CF of the composite interference envelope.
    pub fn interference_sum(&self, omega: f64) -> Result<CfValue> {
        self.interference.eval(omega)
    }

    /// The equivalent interference model this system maps onto.
    pub fn interference_model(&self) -> (f64, f64) {
        (self.interference.omega_avg(), self.interference.alpha())
    }
}

/// Build the pair of system-level CF evaluators for a configuration.
pub fn system_cfs(config: &SystemConfig) -> Result<SystemCfs> {
    config.validate()?;
    let m = config.m_branches as f64;
    let n = config.n_interferers as f64;
    let (omega_eq, alpha_eq) = match config.scenario {
        Scenario::Incoherent => (config.omega_i, m * n),
        Scenario::Coherent => (m * config.omega_i, n),
    };
    Ok(SystemCfs {
        desired_branch: BranchCf::new(config.omega_s, 1.0)?,
        m_branches: config.m_branches,
        interference: BranchCf::new(omega_eq, alpha_eq)?,
    })
}

/// Integer power by binary exponentiation; exact repeated multiplication
/// keeps small powers (the common M ≤ 8) away from polar-form roundoff.
pub(crate) fn complex_powi(base: CfValue, exp: u32) -> CfValue {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Scenario;

    fn assert_cf(value: CfValue, re: f64, im: f64, tol: f64) {
        let err = ((value.re - re).powi(2) + (value.im - im).powi(2)).sqrt();
        let scale = (re * re + im * im).sqrt().max(1e-30);
        assert!(
            err <= tol * scale.max(1e-3),
            "cf {value} vs ({re:e}, {im:e}): err {err:e}"
        );
    }

    #[test]
    fn rayleigh_branch_values() {
        let cf = BranchCf::new(1.0, 1.0).unwrap();
        assert_cf(
            cf.eval(2.0).unwrap(),
            -0.076_159_013_825_536_838,
            0.652_049_332_173_292_183,
            1e-13,
        );
        assert_cf(
            cf.eval(0.7).unwrap(),
            0.774_061_325_599_814_217,
            0.548_835_135_847_574_369,
            1e-13,
        );
    }

    #[test]
    fn shaped_envelope_values() {
        assert_cf(
            branch_cf(2.0, 1.0, 10.0).unwrap(),
            0.609_229_461_863_248_785,
            -0.038_993_884_775_730_631,
            1e-13,
        );
        assert_cf(
            branch_cf(5.0, 1.0, 2.5).unwrap(),
            0.054_213_586_992_394_835,
            0.016_851_813_502_713_542,
            1e-12,
        );
        assert_cf(
            branch_cf(1.3, 2.0, 3.5).unwrap(),
            -0.659_665_765_307_204_23,
            -0.094_158_895_768_497_288,
            1e-13,
        );
        assert_cf(
            branch_cf(0.9, 1.5, 2.0).unwrap(),
            0.100_261_739_865_348_53,
            0.862_458_251_372_481_32,
            1e-13,
        );
        assert_cf(
            branch_cf(0.3, 1.0, 25.0).unwrap(),
            0.077_382_524_977_009_885,
            0.985_836_844_289_100_13,
            1e-13,
        );
    }

    #[test]
    fn large_alpha_near_origin_stays_inside_unit_disc() {
        let v = branch_cf(0.05, 1.0, 50.0).unwrap();
        assert_cf(v, 0.938_161_191_694_248_033, 0.345_297_470_242_382_096, 1e-12);
        assert!((v.norm() - 0.999_688_333_710_542_185).abs() < 1e-12);
    }

    #[test]
    fn large_alpha_deep_tail_is_negligible_and_accurate() {
        // ω√Ω well past the oscillatory knee at α = 50: the CF has decayed
        // to ~1e-51 and the evaluation must not blow up into noise.
        let v = branch_cf(31.3, 1.0, 50.0).unwrap();
        assert!(v.re > 9.3e-51 && v.re < 9.6e-51, "re = {:e}", v.re);
        assert!(v.im.abs() < 1e-55, "im = {:e}", v.im);
    }

    #[test]
    fn hermitian_symmetry() {
        for &(omega, omega_avg, alpha) in &[
            (2.0, 1.0, 1.0),
            (0.35, 2.2, 4.0),
            (7.7, 0.4, 12.0),
            (1.05, 3.0, 2.5),
        ] {
            let plus = branch_cf(omega, omega_avg, alpha).unwrap();
            let minus = branch_cf(-omega, omega_avg, alpha).unwrap();
            assert_eq!(plus.re, minus.re);
            assert_eq!(plus.im, -minus.im);
        }
    }

    #[test]
    fn magnitude_bounded_by_one() {
        for alpha in [1.0, 2.0, 5.0, 15.0, 30.0, 50.0] {
            let cf = BranchCf::new(1.7, alpha).unwrap();
            let mut omega = 0.0;
            while omega <= 40.0 {
                let v = cf.eval(omega).unwrap();
                assert!(
                    v.norm() <= 1.0 + 1e-12,
                    "|Φ({omega})| = {} at alpha {alpha}",
                    v.norm()
                );
                omega += 0.37;
            }
        }
    }

    #[test]
    fn unit_value_at_origin() {
        let v = branch_cf(0.0, 3.0, 7.0).unwrap();
        assert_eq!(v, CfValue::new(1.0, 0.0));
    }

    #[test]
    fn desired_sum_is_branch_power() {
        let mut cfg = SystemConfig::new(3, 2, Scenario::Incoherent);
        cfg.omega_s = 2.0;
        let sys = system_cfs(&cfg).unwrap();
        assert_cf(
            sys.desired_sum(1.1).unwrap(),
            -0.296_817_212_088_041_32,
            -0.355_231_629_828_779_84,
            1e-12,
        );
    }

    #[test]
    fn scenario_interference_mapping() {
        let mut cfg = SystemConfig::new(3, 5, Scenario::Incoherent);
        cfg.omega_i = 0.7;
        let sys = system_cfs(&cfg).unwrap();
        assert_eq!(sys.interference_model(), (0.7, 15.0));
        let direct = branch_cf(1.3, 0.7, 15.0).unwrap();
        assert_eq!(sys.interference_sum(1.3).unwrap(), direct);

        cfg.scenario = Scenario::Coherent;
        let sys = system_cfs(&cfg).unwrap();
        let (omega_eq, alpha) = sys.interference_model();
        assert!((omega_eq - 3.0 * 0.7).abs() < 1e-15);
        assert_eq!(alpha, 5.0);
        let direct = branch_cf(1.3, omega_eq, alpha).unwrap();
        assert_eq!(sys.interference_sum(1.3).unwrap(), direct);
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let z = CfValue::new(0.3, -0.8);
        let mut manual = CfValue::new(1.0, 0.0);
        for _ in 0..7 {
            manual *= z;
        }
        let fast = complex_powi(z, 7);
        assert!((fast - manual).norm() < 1e-15);
        assert_eq!(complex_powi(z, 0), CfValue::new(1.0, 0.0));
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(BranchCf::new(0.0, 1.0).is_err());
        assert!(BranchCf::new(1.0, -1.0).is_err());
        assert!(branch_cf(f64::INFINITY, 1.0, 1.0).is_err());
    }
}
