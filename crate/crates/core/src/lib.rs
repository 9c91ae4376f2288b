//! Analytic and simulation-based statistics of the output
//! signal-to-interference ratio of an M-branch equal-gain combining
//! receiver operating among N Rayleigh-faded cochannel interferers.
//!
//! The library computes the first-order statistic (outage probability) and
//! the second-order statistics (average level crossing rate and average
//! fade duration) of the instantaneous output SIR through several
//! independent routes — a conditional-CDF density integral, numerical
//! characteristic function inversion, a trigonometric series expansion and
//! closed forms where they exist — plus a Clarke-model Monte Carlo
//! simulator used to validate all of them against actual fading
//! trajectories.

pub mod analytic;
pub mod charfun;
pub mod error;
pub mod quadrature;
pub mod simulator;
pub mod specfun;

pub use analytic::{
    average_fade_duration, level_crossing_rate, outage_probability, stat_point, z_from_nsirth_db,
    BeaulieuParams, Diagnostics, EvalParams, Method, MethodEval, Scenario, StatPoint, SystemConfig,
};
pub use error::{Error, Result};
pub use quadrature::{QuadratureResult, QuadratureSpec};
pub use simulator::{
    egc_sir_trace, empirical_stats, validate_against_analytic, EmpiricalStats, FadingTrace,
    SimParams, ValidationReport,
};
