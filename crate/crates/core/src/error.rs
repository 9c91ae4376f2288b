//! Crate-wide error type.
//!
//! Numerical failures carry enough context (routine name, offending
//! parameters, partial results) for a caller to report them verbatim.

use std::fmt;

/// Errors produced by the numerics and simulation layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside a routine's mathematical domain.
    Domain {
        routine: &'static str,
        message: String,
    },
    /// An iterative evaluation failed to meet its tolerance within budget.
    NotConverged {
        routine: &'static str,
        terms_used: usize,
    },
    /// An integrand produced a non-finite value at an abscissa.
    NonFiniteIntegrand { x: f64 },
    /// Adaptive quadrature exhausted its subdivision or panel budget before
    /// reaching tolerance. Carries the partial result.
    QuadratureBudget {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
        subdivisions: usize,
    },
    /// A statistic method was requested for a diversity order it does not
    /// support (closed forms and the density integral exist only for M <= 2).
    MethodDomain {
        method: &'static str,
        m_branches: u32,
    },
    /// Series partial sums show no decay at the truncation point; the
    /// sampling parameters (T, L) are unusable for this configuration.
    SeriesDiverged { head: f64, tail: f64 },
    /// The fade-duration ratio is undefined because the crossing rate
    /// underflowed at this threshold.
    AfdUndefined { z: f64 },
    /// A configuration or simulation parameter violated its invariants.
    InvalidConfig { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { routine, message } => {
                write!(f, "{routine}: domain error: {message}")
            }
            Error::NotConverged {
                routine,
                terms_used,
            } => write!(
                f,
                "{routine}: did not converge within {terms_used} terms"
            ),
            Error::NonFiniteIntegrand { x } => {
                write!(f, "quadrature: integrand non-finite at x = {x:e}")
            }
            Error::QuadratureBudget {
                value,
                error_estimate,
                evaluations,
                subdivisions,
            } => write!(
                f,
                "quadrature: budget exceeded after {evaluations} evaluations / \
                 {subdivisions} subdivisions (partial value {value:e}, \
                 error estimate {error_estimate:e})"
            ),
            Error::MethodDomain { method, m_branches } => {
                write!(f, "{method} requires M <= 2 (got M = {m_branches})")
            }
            Error::SeriesDiverged { head, tail } => write!(
                f,
                "series: terms not decaying at truncation (head {head:e}, tail {tail:e}); \
                 increase T or L"
            ),
            Error::AfdUndefined { z } => write!(
                f,
                "fade duration undefined at z = {z:e}: crossing rate underflowed"
            ),
            Error::InvalidConfig { message } => write!(f, "invalid configuration: {message}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
