//! Shared fixtures for the criterion benchmarks: the reference systems
//! and thresholds the benches sweep, kept in one place so the benchmark
//! targets and their smoke tests agree on what is being measured.

use egcstat::{z_from_nsirth_db, Scenario, SystemConfig};

/// Dual-branch reference system — every analytic route supports it, so
/// the four methods can be compared head to head.
pub fn dual_branch() -> SystemConfig {
    SystemConfig::new(2, 2, Scenario::Incoherent)
}

/// High-diversity system where only the numerical routes apply.
pub fn high_diversity() -> SystemConfig {
    SystemConfig::new(3, 5, Scenario::Incoherent)
}

/// Normalized SIR thresholds (dB) spanning the easy middle of the sweep
/// and both hard edges, where the two numerical routes pay very
/// different costs.
pub const SWEEP_DB: [f64; 3] = [-10.0, 10.0, 30.0];

/// Linear power threshold for a normalized SIR threshold in dB.
pub fn threshold(config: &SystemConfig, db: f64) -> f64 {
    z_from_nsirth_db(db, config).expect("benchmark threshold must be valid")
}
