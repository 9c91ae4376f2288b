//! Gaussian hypergeometric function ₂F₁(a, b; c; z) by direct power series
//! inside the unit disc. The library only ever needs |z| < 1 — its main use
//! is the hypergeometric representation of the incomplete beta function,
//! B(z; a, b) = (z^a / a) ₂F₁(a, 1-b; a+1; z), which serves as an
//! independent route for cross-checking the continued-fraction evaluation —
//! so no analytic continuation is provided; out-of-range arguments are a
//! domain error, not a wrong answer.

use super::{SpecFunResult, SERIES_BUDGET, SERIES_TOL};
use crate::error::{Error, Result};

/// ₂F₁(a, b; c; z) for real arguments with |z| < 1.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<SpecFunResult> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::Domain {
            routine: "gauss_2f1",
            message: format!("arguments must be finite, got a={a}, b={b}, c={c}, z={z}"),
        });
    }
    if c <= 0.0 && c == c.floor() {
        return Err(Error::Domain {
            routine: "gauss_2f1",
            message: format!("c must not be a non-positive integer, got c={c}"),
        });
    }
    if z.abs() >= 1.0 {
        return Err(Error::Domain {
            routine: "gauss_2f1",
            message: format!("series requires |z| < 1, got z={z}"),
        });
    }
    if z == 0.0 {
        return Ok(SpecFunResult::exact(1.0));
    }

    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small_streak = 0u32;
    for k in 0..SERIES_BUDGET {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) * z / ((c + kf) * (kf + 1.0));
        sum += term;
        if term == 0.0 {
            return Ok(SpecFunResult {
                value: sum,
                converged: true,
                terms_used: k + 2,
            });
        }
        if term.abs() <= SERIES_TOL * sum.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(SpecFunResult {
                    value: sum,
                    converged: true,
                    terms_used: k + 2,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(SpecFunResult {
        value: sum,
        converged: false,
        terms_used: SERIES_BUDGET + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(a: f64, b: f64, c: f64, z: f64) -> f64 {
        let r = gauss_2f1(a, b, c, z).unwrap();
        assert!(r.converged, "2F1({a},{b};{c};{z}) did not converge");
        r.value
    }

    fn assert_rel(value: f64, expected: f64, tol: f64) {
        let err = (value - expected).abs() / expected.abs();
        assert!(
            err <= tol,
            "value {value:e} vs expected {expected:e}: rel err {err:e} > {tol:e}"
        );
    }

    #[test]
    fn reference_values() {
        assert_rel(
            val(0.5, 3.0, 1.5, -1.0 / 3.0),
            0.761_962_380_793_915_847,
            1e-13,
        );
        assert_rel(
            val(0.5, 1.0, 1.5, 0.25),
            1.098_612_288_668_109_7,
            1e-13,
        );
        assert_rel(
            val(2.0, 3.0, 4.5, -0.8),
            0.441_180_287_386_046_22,
            1e-13,
        );
    }

    #[test]
    fn elementary_reductions() {
        // ₂F₁(1, 1; 2; z) = -ln(1-z)/z
        for &z in &[-0.7, -0.2, 0.3, 0.6] {
            assert_rel(val(1.0, 1.0, 2.0, z), -(1.0 - z).ln() / z, 1e-13);
        }
        // ₂F₁(a, b; b; z) = (1-z)^{-a}
        assert_rel(val(2.5, 0.5, 0.5, -0.4), 1.4f64.powf(-2.5), 1e-13);
    }

    #[test]
    fn terminating_polynomial() {
        // a = -2 terminates: 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let got = val(-2.0, 1.5, 0.5, 0.9);
        let expected = 1.0 - 2.0 * 1.5 * 0.9 / 0.5 + 1.5 * 2.5 * 0.81 / (0.5 * 1.5);
        assert_rel(got, expected, 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(gauss_2f1(1.0, 1.0, 0.0, 0.5).is_err());
        assert!(gauss_2f1(1.0, 1.0, -3.0, 0.5).is_err());
        assert!(gauss_2f1(1.0, 1.0, 1.5, 1.0).is_err());
        assert!(gauss_2f1(1.0, 1.0, 1.5, -1.2).is_err());
        assert!(gauss_2f1(f64::NAN, 1.0, 1.5, 0.2).is_err());
    }
}
