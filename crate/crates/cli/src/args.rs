//! Shared argument groups, the key=value config manifest, and the logic
//! that merges both into validated library types.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use egcstat::{BeaulieuParams, EvalParams, Method, Scenario, SystemConfig};

use crate::Failure;

/// System description shared by every subcommand. Each flag may instead be
/// supplied by `--config`; explicit flags win.
#[derive(clap::Args, Debug, Clone)]
pub struct SystemArgs {
    /// Key=value manifest supplying defaults for any long flag.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Diversity branches M (>= 1).
    #[arg(long)]
    pub m: Option<u32>,

    /// Cochannel interferers N (>= 1).
    #[arg(long)]
    pub n: Option<u32>,

    /// Interference combining across branches: `incoherent` or `coherent`.
    /// Required for M >= 2; at M = 1 the two coincide.
    #[arg(long)]
    pub scenario: Option<String>,

    /// Mean per-branch SIR gamma = Omega_S / Omega_I in dB
    /// (sets Omega_S = 10^(dB/10) with Omega_I = 1).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_db: Option<f64>,

    /// Desired-signal mean power per branch (default 1).
    #[arg(long, conflicts_with = "gamma_db")]
    pub omega_s: Option<f64>,

    /// Per-interferer mean power per branch (default 1).
    #[arg(long, conflicts_with = "gamma_db")]
    pub omega_i: Option<f64>,

    /// Maximum Doppler frequency of the desired signal in Hz (default 1).
    #[arg(long)]
    pub f_m0: Option<f64>,

    /// Maximum Doppler frequency of the interferers in Hz (default f_m0).
    #[arg(long)]
    pub f_mi: Option<f64>,
}

/// Numerical knobs for the analytic routes.
#[derive(clap::Args, Debug, Clone)]
pub struct NumericArgs {
    /// Series sampling period T (default 80).
    #[arg(long, conflicts_with = "series_target")]
    pub series_t: Option<f64>,

    /// Series truncation length L (default 200).
    #[arg(long, conflicts_with = "series_target")]
    pub series_l: Option<usize>,

    /// Retune (T, L) per threshold for this absolute series error target
    /// instead of using fixed values.
    #[arg(long, value_name = "ABS_ERR")]
    pub series_target: Option<f64>,

    /// Absolute and relative tolerance of the adaptive quadrature routes
    /// (default 1e-9).
    #[arg(long, value_name = "TOL")]
    pub quad_tol: Option<f64>,
}

/// Parsed `--config` manifest: plain `key = value` lines, `#` comments.
#[derive(Debug, Default)]
pub struct Manifest {
    values: HashMap<String, String>,
}

/// Every key a manifest may define; one file can serve all subcommands.
const MANIFEST_KEYS: &[&str] = &[
    "m",
    "n",
    "scenario",
    "gamma-db",
    "omega-s",
    "omega-i",
    "f-m0",
    "f-mi",
    "z-db",
    "nsirth-db",
    "method",
    "series-t",
    "series-l",
    "series-target",
    "quad-tol",
    "check",
    "seed",
    "trials",
    "duration-periods",
    "samples-per-period",
    "sinusoids",
];

impl Manifest {
    pub fn load(path: &PathBuf) -> Result<Manifest, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::usage(format!(
                    "config {} line {}: expected key = value, got '{raw}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim().to_string();
            if !MANIFEST_KEYS.contains(&key.as_str()) {
                return Err(Failure::usage(format!(
                    "config {} line {}: unknown key '{key}'",
                    path.display(),
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Manifest { values })
    }

    pub fn from_args(sys: &SystemArgs) -> Result<Manifest, Failure> {
        match &sys.config {
            Some(path) => Manifest::load(path),
            None => Ok(Manifest::default()),
        }
    }

    /// Typed lookup; a value that fails to parse is a usage error naming
    /// the key.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Failure::usage(format!("config key '{key}': cannot parse value '{raw}'"))
            }),
        }
    }
}

fn parse_scenario(s: &str) -> Result<Scenario, Failure> {
    match s.trim().to_ascii_lowercase().as_str() {
        "incoherent" => Ok(Scenario::Incoherent),
        "coherent" => Ok(Scenario::Coherent),
        other => Err(Failure::usage(format!(
            "unknown scenario '{other}' (expected incoherent or coherent)"
        ))),
    }
}

/// Merge flags over the manifest and produce a validated system
/// configuration.
pub fn resolve_config(sys: &SystemArgs, man: &Manifest) -> Result<SystemConfig, Failure> {
    let m = sys
        .m
        .or(man.get("m")?)
        .ok_or_else(|| Failure::usage("--m is required"))?;
    let n = sys
        .n
        .or(man.get("n")?)
        .ok_or_else(|| Failure::usage("--n is required"))?;

    let scenario = match sys.scenario.clone().or(man.get::<String>("scenario")?) {
        Some(s) => parse_scenario(&s)?,
        // The combining model is irrelevant at a single branch, but for
        // M >= 2 it changes the statistics materially, so it must be chosen
        // consciously.
        None if m <= 1 => Scenario::Incoherent,
        None => {
            return Err(Failure::usage(
                "--scenario is required for M >= 2 (incoherent or coherent)",
            ))
        }
    };

    let gamma_db = sys.gamma_db.or(man.get("gamma-db")?);
    let omega_s_raw = sys.omega_s.or(man.get("omega-s")?);
    let omega_i_raw = sys.omega_i.or(man.get("omega-i")?);
    let (omega_s, omega_i) = match (gamma_db, omega_s_raw, omega_i_raw) {
        (Some(db), None, None) => (10f64.powf(db / 10.0), 1.0),
        (None, os, oi) => (os.unwrap_or(1.0), oi.unwrap_or(1.0)),
        _ => {
            return Err(Failure::usage(
                "pass either --gamma-db or --omega-s/--omega-i, not both",
            ))
        }
    };

    let f_m0 = sys.f_m0.or(man.get("f-m0")?).unwrap_or(1.0);
    let f_mi = sys.f_mi.or(man.get("f-mi")?).unwrap_or(f_m0);

    let config = SystemConfig {
        m_branches: m,
        n_interferers: n,
        omega_s,
        omega_i,
        f_m0,
        f_mi,
        scenario,
    };
    config.validate()?;
    Ok(config)
}

fn method_long_name(method: Method) -> &'static str {
    match method {
        Method::Density => "density integral",
        Method::Quadrature => "quadrature",
        Method::Series => "series",
        Method::Closed => "closed form",
    }
}

/// Resolve `--method` (comma-separated) or default to every route the
/// diversity order supports. Requesting an unsupported route is a usage
/// error, not a numerical one.
pub fn resolve_methods(
    arg: &Option<String>,
    man: &Manifest,
    m_branches: u32,
) -> Result<Vec<Method>, Failure> {
    let spec = arg.clone().or(man.get::<String>("method")?);
    let mut methods = match spec {
        Some(list) => {
            let mut out = Vec::new();
            for token in list.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    continue;
                }
                out.push(Method::from_str(token).map_err(|e| Failure::usage(e.to_string()))?);
            }
            out
        }
        None => Method::ALL
            .iter()
            .copied()
            .filter(|me| me.supports(m_branches))
            .collect(),
    };
    methods.dedup();
    if methods.is_empty() {
        return Err(Failure::usage("at least one method must be requested"));
    }
    for &me in &methods {
        if !me.supports(m_branches) {
            return Err(Failure::usage(format!(
                "{} requires M <= 2 (got M = {m_branches})",
                method_long_name(me)
            )));
        }
    }
    Ok(methods)
}

/// Per-threshold numeric policy resolved from flags and manifest.
#[derive(Debug, Clone, Copy)]
pub struct NumericPolicy {
    series_t: f64,
    series_l: usize,
    series_target: Option<f64>,
    quad_tol: Option<f64>,
}

impl NumericPolicy {
    pub fn resolve(num: &NumericArgs, man: &Manifest) -> Result<NumericPolicy, Failure> {
        let defaults = BeaulieuParams::default();
        Ok(NumericPolicy {
            series_t: num.series_t.or(man.get("series-t")?).unwrap_or(defaults.t_period),
            series_l: num.series_l.or(man.get("series-l")?).unwrap_or(defaults.l_terms),
            series_target: num.series_target.or(man.get("series-target")?),
            quad_tol: num.quad_tol.or(man.get("quad-tol")?),
        })
    }

    /// Evaluation parameters at one threshold; with `--series-target` the
    /// series truncation is retuned per point.
    pub fn eval_params(&self, config: &SystemConfig, z: f64) -> Result<EvalParams, Failure> {
        let mut params = EvalParams::default();
        params.series = match self.series_target {
            Some(target) => BeaulieuParams::tuned(config, z, target)?,
            None => BeaulieuParams {
                t_period: self.series_t,
                l_terms: self.series_l,
            },
        };
        if let Some(tol) = self.quad_tol {
            params.quadrature.abs_tol = tol;
            params.quadrature.rel_tol = tol;
        }
        Ok(params)
    }
}
