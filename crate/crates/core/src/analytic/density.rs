//! Conditioning-on-the-interference route for M ≤ 2.
//!
//! The output SIR falls below z exactly when the desired envelope sum X
//! falls below √z times the interference envelope Y, so
//!
//!   F_Z(z) = ∫₀^∞ F_X(y√z) f_Y(y) dy
//!   N_Z    = pref · ∫₀^∞ f_X(y√z) f_Y(y) dy
//!
//! with f_Y the gamma-power aggregate envelope density. Both integrals
//! are computed in the normalized variable t = y/√Ω_eq, which removes
//! every power scale from the integrand. This route exists only where
//! F_X and f_X have elementary forms (M ∈ {1, 2}) and serves as an
//! independent check on the CF-based methods.

use crate::analytic::envelope::{desired_envelope_cdf_m2, desired_envelope_pdf_m2};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_semi_infinite, QuadratureSpec};
use crate::specfun::ln_gamma;
use std::f64::consts::LN_2;

/// The chi-density weight decays like e^{-t²}, so unit-width tail panels
/// detect the end of the support quickly.
const TAIL_WIDTH: f64 = 1.0;

fn require_low_order(m: u32) -> Result<()> {
    if m > 2 {
        return Err(Error::MethodDomain {
            method: "density",
            m_branches: m,
        });
    }
    Ok(())
}

/// Normalized interference envelope density 2 t^{2α-1} e^{-t²} / Γ(α),
/// evaluated in log space so large shapes cannot overflow the coefficient.
struct ChiWeight {
    alpha: f64,
    ln_gamma_alpha: f64,
}

impl ChiWeight {
    fn new(alpha: f64) -> Result<ChiWeight> {
        Ok(ChiWeight {
            alpha,
            ln_gamma_alpha: ln_gamma(alpha)?,
        })
    }

    fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (LN_2 + (2.0 * self.alpha - 1.0) * t.ln() - t * t - self.ln_gamma_alpha).exp()
    }
}

/// Outage probability via the conditional-CDF integral.
pub(crate) fn op_density_norm(
    m: u32,
    alpha: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, usize)> {
    require_low_order(m)?;
    let weight = ChiWeight::new(alpha)?;
    let sqrt_r = r.sqrt();
    // F_X depends on its argument only through x²/Ω_S = t²r, so the unit
    // power passed here fixes nothing but the parameterization.
    let cdf = move |t: f64| -> f64 {
        if m == 1 {
            -(-t * t * r).exp_m1()
        } else {
            desired_envelope_cdf_m2(t * sqrt_r, 1.0).unwrap_or(f64::NAN)
        }
    };
    let integrand = move |t: f64| cdf(t) * weight.eval(t);
    let mut eff = *spec;
    eff.tail_panel_width = spec.tail_panel_width.min(TAIL_WIDTH);
    let q = adaptive_semi_infinite(&integrand, 0.0, &eff)?;
    Ok((q.value, q.evaluations))
}

/// Normalized level-crossing rate via the conditional-PDF integral.
/// `pref_norm` is √(π/2)·√(M + ρ²r).
pub(crate) fn lcr_density_norm(
    m: u32,
    alpha: f64,
    r: f64,
    pref_norm: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, usize)> {
    require_low_order(m)?;
    let weight = ChiWeight::new(alpha)?;
    let sqrt_r = r.sqrt();
    // √Ω_S · f_X(t·√(Ω_eq z)) is dimensionless and depends only on s = t√r.
    let scaled_pdf = move |t: f64| -> f64 {
        let s = t * sqrt_r;
        if m == 1 {
            2.0 * s * (-s * s).exp()
        } else {
            desired_envelope_pdf_m2(s, 1.0).unwrap_or(f64::NAN)
        }
    };
    let integrand = move |t: f64| scaled_pdf(t) * weight.eval(t);
    let mut eff = *spec;
    eff.tail_panel_width = spec.tail_panel_width.min(TAIL_WIDTH);
    let q = adaptive_semi_infinite(&integrand, 0.0, &eff)?;
    Ok((pref_norm * q.value, q.evaluations))
}
