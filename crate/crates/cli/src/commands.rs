//! Subcommand implementations.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use egcstat::{
    stat_point, validate_against_analytic, z_from_nsirth_db, Method, SimParams, StatPoint,
    SystemConfig, ValidationReport,
};

use crate::args::{resolve_config, resolve_methods, Manifest, NumericArgs, NumericPolicy, SystemArgs};
use crate::grid::parse_range;
use crate::row::{emit, fmt_float, render, Row};
use crate::Failure;

#[derive(clap::Args, Debug)]
pub struct ComputeArgs {
    #[command(flatten)]
    sys: SystemArgs,
    #[command(flatten)]
    num: NumericArgs,
    /// Normalized SIR threshold gamma/z in dB.
    #[arg(long, allow_negative_numbers = true)]
    z_db: Option<f64>,
    /// Comma-separated subset of density,quadrature,series,closed
    /// (default: every method the diversity order supports).
    #[arg(long)]
    method: Option<String>,
    /// Emit one JSON object per row instead of CSV.
    #[arg(long)]
    json: bool,
    /// Output file; relative paths land in $EGCSTAT_OUT_DIR, stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    sys: SystemArgs,
    #[command(flatten)]
    num: NumericArgs,
    /// Threshold grid start:stop:step in NSIRth dB, endpoints inclusive
    /// (default -10:30:1).
    #[arg(long, allow_hyphen_values = true)]
    nsirth_db: Option<String>,
    /// Comma-separated subset of density,quadrature,series,closed
    /// (default: every method the diversity order supports).
    #[arg(long)]
    method: Option<String>,
    /// Fail (exit 2) when any two methods disagree on op or lcr_norm by
    /// more than this tolerance at any grid point.
    #[arg(long, value_name = "TOL")]
    check: Option<f64>,
    /// Emit one JSON object per row instead of CSV.
    #[arg(long)]
    json: bool,
    /// Output file; relative paths land in $EGCSTAT_OUT_DIR, stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    sys: SystemArgs,
    /// Threshold grid start:stop:step in NSIRth dB (default -5:15:5).
    #[arg(long, allow_hyphen_values = true)]
    nsirth_db: Option<String>,
    /// Base RNG seed; every (trial, signal, branch) gets its own stream.
    #[arg(long)]
    seed: Option<u64>,
    /// Independent simulation trials averaged into the report (default 1).
    #[arg(long)]
    trials: Option<u32>,
    /// Trace length in Doppler periods of the desired signal (default 5000).
    #[arg(long)]
    duration_periods: Option<f64>,
    /// Samples per Doppler period of the desired signal (default 64).
    #[arg(long)]
    samples_per_period: Option<f64>,
    /// Sinusoids per Clarke fading process (default 256).
    #[arg(long)]
    sinusoids: Option<u32>,
    /// Emit one JSON object per row instead of CSV.
    #[arg(long)]
    json: bool,
    /// Output file; relative paths land in $EGCSTAT_OUT_DIR, stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    sys: SystemArgs,
    #[command(flatten)]
    num: NumericArgs,
    /// Threshold grid start:stop:step in NSIRth dB (default -10:30:5).
    #[arg(long, allow_hyphen_values = true)]
    nsirth_db: Option<String>,
    /// Emit one JSON object per row instead of CSV.
    #[arg(long)]
    json: bool,
    /// Output file; relative paths land in $EGCSTAT_OUT_DIR, stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn grid_from(
    flag: &Option<String>,
    man: &Manifest,
    default: &str,
) -> Result<Vec<f64>, Failure> {
    let spec = flag
        .clone()
        .or(man.get::<String>("nsirth-db")?)
        .unwrap_or_else(|| default.to_string());
    parse_range(&spec)
}

fn describe_system(config: &SystemConfig) {
    let gamma_db = 10.0 * (config.omega_s / config.omega_i).log10();
    eprintln!(
        "M = {}, N = {}, {} interference; gamma = {:.2} dB \
         (Omega_S = {}, Omega_I = {}); f_m0 = {} Hz, f_mi = {} Hz",
        config.m_branches,
        config.n_interferers,
        config.scenario,
        gamma_db,
        config.omega_s,
        config.omega_i,
        config.f_m0,
        config.f_mi
    );
}

pub fn run_compute(args: &ComputeArgs) -> Result<(), Failure> {
    let man = Manifest::from_args(&args.sys)?;
    let config = resolve_config(&args.sys, &man)?;
    let methods = resolve_methods(&args.method, &man, config.m_branches)?;
    let policy = NumericPolicy::resolve(&args.num, &man)?;
    let z_db = args
        .z_db
        .or(man.get("z-db")?)
        .ok_or_else(|| Failure::usage("--z-db is required"))?;

    let z = z_from_nsirth_db(z_db, &config)?;
    let params = policy.eval_params(&config, z)?;
    let rows: Vec<Row> = methods
        .iter()
        .map(|&method| stat_point(z, &config, method, &params).map(|p| Row::from_point(&p, &config)))
        .collect::<Result<_, egcstat::Error>>()?;

    describe_system(&config);
    eprintln!("NSIRth = {} dB  =>  z = {}", fmt_float(z_db), fmt_float(z));
    eprintln!(
        "{:<12} {:>16} {:>16} {:>16} {:>8}",
        "method", "op", "lcr_norm", "afd_norm", "evals"
    );
    for row in &rows {
        eprintln!(
            "{:<12} {:>16} {:>16} {:>16} {:>8}",
            row.method,
            fmt_float(row.op),
            fmt_float(row.lcr_norm),
            fmt_float(row.afd_norm),
            row.evals
        );
    }

    emit(&render(&rows, args.json), &args.output)
}

/// Worst pairwise difference found while sweeping with `--check`.
struct Disagreement {
    nsirth_db: f64,
    metric: &'static str,
    pair: (&'static str, &'static str),
    diff: f64,
}

fn worst_pairwise(nsirth_db: f64, points: &[StatPoint]) -> Option<Disagreement> {
    let mut worst: Option<Disagreement> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for (metric, a, b) in [
                ("op", points[i].op, points[j].op),
                ("lcr_norm", points[i].lcr_norm, points[j].lcr_norm),
            ] {
                let diff = (a - b).abs();
                if worst.as_ref().map_or(true, |w| diff > w.diff) {
                    worst = Some(Disagreement {
                        nsirth_db,
                        metric,
                        pair: (points[i].method.name(), points[j].method.name()),
                        diff,
                    });
                }
            }
        }
    }
    worst
}

pub fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let man = Manifest::from_args(&args.sys)?;
    let config = resolve_config(&args.sys, &man)?;
    let methods = resolve_methods(&args.method, &man, config.m_branches)?;
    let policy = NumericPolicy::resolve(&args.num, &man)?;
    let check = args.check.or(man.get("check")?);
    let grid = grid_from(&args.nsirth_db, &man, "-10:30:1")?;

    // Grid points are independent; the collect below fixes the row order,
    // so the output is identical under any parallel schedule.
    let per_point: Vec<(Vec<Row>, Option<Disagreement>)> = grid
        .par_iter()
        .map(|&db| -> Result<(Vec<Row>, Option<Disagreement>), Failure> {
            let z = z_from_nsirth_db(db, &config)?;
            let params = policy.eval_params(&config, z)?;
            let points: Vec<StatPoint> = methods
                .iter()
                .map(|&method| stat_point(z, &config, method, &params))
                .collect::<Result<_, egcstat::Error>>()?;
            let disagreement = worst_pairwise(db, &points);
            let rows = points.iter().map(|p| Row::from_point(p, &config)).collect();
            Ok((rows, disagreement))
        })
        .collect::<Result<_, Failure>>()?;

    let mut rows: Vec<Row> = Vec::with_capacity(grid.len() * methods.len());
    let mut worst: Option<Disagreement> = None;
    for (point_rows, disagreement) in per_point {
        rows.extend(point_rows);
        if let Some(d) = disagreement {
            if worst.as_ref().map_or(true, |w| d.diff > w.diff) {
                worst = Some(d);
            }
        }
    }
    rows.sort_by(|a, b| a.nsirth_db.partial_cmp(&b.nsirth_db).unwrap());

    emit(&render(&rows, args.json), &args.output)?;

    if let Some(tol) = check {
        if let Some(w) = worst {
            if w.diff > tol {
                return Err(Failure::Numerical(format!(
                    "--check failed: |{} - {}| = {:.3e} on {} at NSIRth = {} dB exceeds {:e}",
                    w.pair.0, w.pair.1, w.diff, w.metric, w.nsirth_db, tol
                )));
            }
        }
        eprintln!("check passed: all methods agree within {tol:e}");
    }
    Ok(())
}

fn percent_or_dash(rel_err: f64) -> String {
    if rel_err.is_finite() {
        format!("{:.2}%", 100.0 * rel_err)
    } else {
        "-".to_string()
    }
}

fn validation_rows(report: &ValidationReport, config: &SystemConfig) -> Result<Vec<Row>, Failure> {
    let total_samples = report.samples_per_trial * report.sim.trials as usize;
    let mut rows = Vec::with_capacity(2 * report.rows.len());
    for tv in &report.rows {
        // Re-evaluate the analytic reference only to recover its work
        // counter; values are bit-identical to the report's.
        let params = egcstat::EvalParams {
            series: egcstat::BeaulieuParams::tuned(config, tv.z, 1e-9)?,
            ..egcstat::EvalParams::default()
        };
        let analytic = stat_point(tv.z, config, Method::Series, &params)?;
        rows.push(Row::from_point(&analytic, config));
        rows.push(Row {
            nsirth_db: tv.nsirth_db,
            z: tv.z,
            scenario: config.scenario.to_string(),
            m: config.m_branches,
            n: config.n_interferers,
            method: "simulation".to_string(),
            op: tv.sim_op,
            lcr_norm: tv.sim_lcr_norm,
            afd_norm: tv.sim_afd_norm,
            evals: total_samples,
        });
    }
    Ok(rows)
}

pub fn run_validate(args: &ValidateArgs) -> Result<(), Failure> {
    let man = Manifest::from_args(&args.sys)?;
    let config = resolve_config(&args.sys, &man)?;
    let grid = grid_from(&args.nsirth_db, &man, "-5:15:5")?;

    let seed = args.seed.or(man.get("seed")?).unwrap_or(1);
    let trials = args.trials.or(man.get("trials")?).unwrap_or(1);
    let duration_periods = args
        .duration_periods
        .or(man.get("duration-periods")?)
        .unwrap_or(5000.0);
    let samples_per_period = args
        .samples_per_period
        .or(man.get("samples-per-period")?)
        .unwrap_or(64.0);
    let n_sinusoids = args.sinusoids.or(man.get("sinusoids")?).unwrap_or(256);

    if !(duration_periods.is_finite() && duration_periods > 0.0)
        || !(samples_per_period.is_finite() && samples_per_period > 0.0)
    {
        return Err(Failure::usage(
            "--duration-periods and --samples-per-period must be positive",
        ));
    }

    let sim = SimParams {
        sample_rate: samples_per_period * config.f_m0,
        duration: duration_periods / config.f_m0,
        n_sinusoids,
        seed,
        trials,
    };

    let grid_z = grid
        .iter()
        .map(|&db| z_from_nsirth_db(db, &config))
        .collect::<Result<Vec<_>, egcstat::Error>>()?;

    let report = validate_against_analytic(&config, &grid_z, &sim)?;
    let rows = validation_rows(&report, &config)?;

    describe_system(&config);
    eprintln!(
        "trials = {}, seed = {}, {} samples/trial at {} Hz ({} Doppler periods), \
         {} sinusoids/process, {} excluded samples",
        report.sim.trials,
        report.sim.seed,
        report.samples_per_trial,
        report.sim.sample_rate,
        duration_periods,
        report.sim.n_sinusoids,
        report.excluded
    );
    eprintln!(
        "{:>10} {:>14} {:>20} {:>8} {:>12} {:>12} {:>10}",
        "NSIRth", "analytic op", "simulated op", "op", "lcr err", "afd err", "rates"
    );
    let mut failures = 0usize;
    for tv in &report.rows {
        let op_flag = if tv.rare_event {
            "rare"
        } else if tv.op_pass {
            "ok"
        } else {
            "FAIL"
        };
        let rate_flag = format!(
            "{}/{}",
            if tv.lcr_pass { "ok" } else { "FAIL" },
            if tv.afd_pass { "ok" } else { "FAIL" }
        );
        if !(tv.op_pass && tv.lcr_pass && tv.afd_pass) {
            failures += 1;
        }
        eprintln!(
            "{:>7.1} dB {:>14} {:>13} ± {:>5.0e} {:>8} {:>12} {:>12} {:>10}",
            tv.nsirth_db,
            fmt_float(tv.analytic_op),
            fmt_float(tv.sim_op),
            tv.op_se,
            op_flag,
            percent_or_dash(tv.lcr_rel_err),
            percent_or_dash(tv.afd_rel_err),
            rate_flag
        );
    }
    if failures > 0 {
        eprintln!("{failures} of {} thresholds outside tolerance", report.rows.len());
    }

    emit(&render(&rows, args.json), &args.output)
}

const BENCH_HEADER: &str = "nsirth_db,method,op_evals,lcr_evals,wall_us";

pub fn run_bench(args: &BenchArgs) -> Result<(), Failure> {
    let man = Manifest::from_args(&args.sys)?;
    let config = resolve_config(&args.sys, &man)?;
    let policy = NumericPolicy::resolve(&args.num, &man)?;
    let grid = grid_from(&args.nsirth_db, &man, "-10:30:5")?;

    let mut lines = Vec::with_capacity(1 + 2 * grid.len());
    if !args.json {
        lines.push(BENCH_HEADER.to_string());
    }
    let mut totals = [(0usize, 0u128), (0usize, 0u128)];
    for &db in &grid {
        let z = z_from_nsirth_db(db, &config)?;
        let params = policy.eval_params(&config, z)?;
        for (slot, method) in [Method::Quadrature, Method::Series].into_iter().enumerate() {
            let start = Instant::now();
            let point = stat_point(z, &config, method, &params)?;
            let wall_us = start.elapsed().as_micros();
            let d = point.diagnostics;
            totals[slot].0 += d.op_evaluations + d.lcr_evaluations;
            totals[slot].1 += wall_us;
            lines.push(if args.json {
                format!(
                    "{{\"nsirth_db\":{},\"method\":\"{}\",\"op_evals\":{},\
                     \"lcr_evals\":{},\"wall_us\":{}}}",
                    fmt_float(db),
                    method.name(),
                    d.op_evaluations,
                    d.lcr_evaluations,
                    wall_us
                )
            } else {
                format!(
                    "{},{},{},{},{}",
                    fmt_float(db),
                    method.name(),
                    d.op_evaluations,
                    d.lcr_evaluations,
                    wall_us
                )
            });
        }
    }

    eprintln!(
        "bench over {} thresholds: quadrature {} evaluations in {} us, \
         series {} terms in {} us",
        grid.len(),
        totals[0].0,
        totals[0].1,
        totals[1].0,
        totals[1].1
    );

    emit(&(lines.join("\n") + "\n"), &args.output)
}
