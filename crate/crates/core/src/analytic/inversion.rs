//! Direct numerical inversion of the product characteristic function.
//!
//! With P(u) = Φ_X(u)^M · Φ_Y(-u√r) in the scale-free coordinate
//! u = ω√Ω_S, the two statistics are the semi-infinite integrals
//!
//!   F_Z   = 1/2 - (1/π) ∫₀^∞ Im{P(u)} / u du
//!   N_Z/f = pref · (1/π) ∫₀^∞ Re{P(u)} du
//!
//! evaluated with the adaptive Gauss–Kronrod driver. This is the
//! general-M reference route the closed forms and series are checked
//! against.

use crate::charfun::{complex_powi, BranchCf};
use crate::error::Result;
use crate::quadrature::{adaptive_semi_infinite, QuadratureSpec};
use crate::specfun::gamma_half_ratio;
use std::f64::consts::PI;

/// Below this u the outage integrand switches to its analytic u → 0 limit.
const SMALL_U: f64 = 1e-6;

/// Native oscillation scale of P: the desired part rotates like
/// e^{iu·M√π/2}, the interference part like e^{-iu√r·R(α)}. Tail panels
/// must resolve one combined period or the tail-quiet detector could
/// mistake cancellation inside a wide panel for decay.
fn panel_width(m: u32, alpha: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mean_rate = m as f64 * PI.sqrt() / 2.0 + r.sqrt() * gamma_half_ratio(alpha)?;
    Ok(spec.tail_panel_width.min(2.0 * PI / mean_rate))
}

struct ProductCf {
    desired: BranchCf,
    interference: BranchCf,
    m: u32,
    sqrt_r: f64,
}

impl ProductCf {
    fn new(m: u32, alpha: f64, r: f64) -> Result<ProductCf> {
        Ok(ProductCf {
            desired: BranchCf::new(1.0, 1.0)?,
            interference: BranchCf::new(1.0, alpha)?,
            m,
            sqrt_r: r.sqrt(),
        })
    }

    /// P(u); NaN on an interior special-function failure so the quadrature
    /// driver reports the offending abscissa.
    fn eval(&self, u: f64) -> num_complex::Complex64 {
        let px = match self.desired.eval(u) {
            Ok(v) => complex_powi(v, self.m),
            Err(_) => return num_complex::Complex64::new(f64::NAN, f64::NAN),
        };
        let py = match self.interference.eval(-u * self.sqrt_r) {
            Ok(v) => v,
            Err(_) => return num_complex::Complex64::new(f64::NAN, f64::NAN),
        };
        px * py
    }
}

/// Outage probability by numerical CF inversion.
pub(crate) fn op_quadrature_norm(
    m: u32,
    alpha: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, usize)> {
    let product = ProductCf::new(m, alpha, r)?;
    // lim_{u→0} Im{P(u)}/u = M·√π/2 - √r·R(α)
    let limit0 = m as f64 * PI.sqrt() / 2.0 - r.sqrt() * gamma_half_ratio(alpha)?;
    let integrand = move |u: f64| {
        if u < SMALL_U {
            limit0
        } else {
            product.eval(u).im / u
        }
    };
    let mut eff = *spec;
    eff.tail_panel_width = panel_width(m, alpha, r, spec)?;
    let q = adaptive_semi_infinite(&integrand, 0.0, &eff)?;
    Ok((0.5 - q.value / PI, q.evaluations))
}

/// Normalized level-crossing rate by numerical CF inversion. `pref_norm`
/// is √(π/2)·√(M + ρ²r).
pub(crate) fn lcr_quadrature_norm(
    m: u32,
    alpha: f64,
    r: f64,
    pref_norm: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, usize)> {
    let product = ProductCf::new(m, alpha, r)?;
    let integrand = move |u: f64| product.eval(u).re;
    let mut eff = *spec;
    eff.tail_panel_width = panel_width(m, alpha, r, spec)?;
    let q = adaptive_semi_infinite(&integrand, 0.0, &eff)?;
    Ok((pref_norm * q.value / PI, q.evaluations))
}
