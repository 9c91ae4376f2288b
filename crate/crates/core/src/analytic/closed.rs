//! Closed-form outage probability and level-crossing rate for single- and
//! dual-branch combining. Everything is computed in the normalized
//! coordinate r = z/β, where β is the effective interference scale of the
//! configured combining scenario, so the expressions are manifestly
//! scale-invariant. Callers handle r = 0 before dispatching here.

use crate::error::{Error, Result};
use crate::specfun::{gamma_half_ratio, incomplete_beta};

fn require_low_order(m: u32) -> Result<()> {
    if m > 2 {
        return Err(Error::MethodDomain {
            method: "closed",
            m_branches: m,
        });
    }
    Ok(())
}

/// Outage probability F_Z(r) for M ∈ {1, 2} branches and a gamma-power
/// interference aggregate with shape `alpha`.
pub(crate) fn op_closed_norm(m: u32, alpha: f64, r: f64) -> Result<f64> {
    require_low_order(m)?;
    if m == 1 {
        // 1 - (1 + r)^{-α}
        return Ok(-(-alpha * r.ln_1p()).exp_m1());
    }
    // q = (1/2) / (1 + 1/r) is the incomplete-beta argument shared by the
    // M = 2 outage and crossing-rate expressions.
    let q = 0.5 / (1.0 + 1.0 / r);
    let beta_term = incomplete_beta(q, 0.5, alpha + 0.5)?;
    let survivor = (-alpha * r.ln_1p()).exp();
    let coef = (alpha.ln() + 0.5 * (0.5 * r).ln() - (alpha + 0.5) * (0.5 * r).ln_1p()).exp();
    Ok(1.0 - survivor - coef * beta_term)
}

/// Normalized level-crossing rate N_Z/f_m0 for M ∈ {1, 2}. `pref_norm` is
/// the slope prefactor √(π/2)·√(M + ρ²r) with ρ the interference-to-desired
/// maximum-Doppler ratio.
pub(crate) fn lcr_closed_norm(m: u32, alpha: f64, r: f64, pref_norm: f64) -> Result<f64> {
    require_low_order(m)?;
    let half_ratio = gamma_half_ratio(alpha)?;
    if m == 1 {
        // 2·pref·R(α)·√r / (1 + r)^{α + 1/2}
        let shape = (0.5 * r.ln() - (alpha + 0.5) * r.ln_1p()).exp();
        return Ok(2.0 * pref_norm * half_ratio * shape);
    }
    let q = 0.5 / (1.0 + 1.0 / r);
    let beta_term = incomplete_beta(q, 0.5, alpha)?;
    let first = (0.5 * r.ln() - (alpha - 0.5) * r.ln_1p()).exp();
    let second = 0.5f64.sqrt()
        * ((alpha - 0.5) * r - 1.0)
        * (-alpha * (0.5 * r).ln_1p()).exp()
        * beta_term;
    Ok(pref_norm * half_ratio / (1.0 + 0.5 * r) * (first + second))
}
