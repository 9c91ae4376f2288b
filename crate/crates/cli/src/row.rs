//! The stable machine-readable row schema shared by every subcommand, in
//! CSV and JSON-lines form, plus the output-path plumbing.

use std::io::Write;
use std::path::{Path, PathBuf};

use egcstat::{StatPoint, SystemConfig};

use crate::Failure;

/// Column order is part of the interface; downstream tooling parses it
/// positionally.
pub const CSV_HEADER: &str = "nsirth_db,z,scenario,m,n,method,op,lcr_norm,afd_norm,evals";

/// Environment variable naming the directory relative output paths land in.
pub const OUT_DIR_VAR: &str = "EGCSTAT_OUT_DIR";

/// One realized statistics row.
#[derive(Debug, Clone)]
pub struct Row {
    pub nsirth_db: f64,
    pub z: f64,
    pub scenario: String,
    pub m: u32,
    pub n: u32,
    pub method: String,
    pub op: f64,
    pub lcr_norm: f64,
    pub afd_norm: f64,
    pub evals: usize,
}

/// Ten significant digits, lowercase specials so the files diff cleanly.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.9e}")
    }
}

/// JSON has no non-finite literals; those become null.
fn fmt_json_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.9e}")
    } else {
        "null".to_string()
    }
}

impl Row {
    pub fn from_point(point: &StatPoint, config: &SystemConfig) -> Row {
        Row {
            nsirth_db: point.nsirth_db,
            z: point.z,
            scenario: config.scenario.to_string(),
            m: config.m_branches,
            n: config.n_interferers,
            method: point.method.name().to_string(),
            op: point.op,
            lcr_norm: point.lcr_norm,
            afd_norm: point.afd_norm,
            evals: point.diagnostics.op_evaluations + point.diagnostics.lcr_evaluations,
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_float(self.nsirth_db),
            fmt_float(self.z),
            self.scenario,
            self.m,
            self.n,
            self.method,
            fmt_float(self.op),
            fmt_float(self.lcr_norm),
            fmt_float(self.afd_norm),
            self.evals
        )
    }

    pub fn json(&self) -> String {
        format!(
            "{{\"nsirth_db\":{},\"z\":{},\"scenario\":\"{}\",\"m\":{},\"n\":{},\
             \"method\":\"{}\",\"op\":{},\"lcr_norm\":{},\"afd_norm\":{},\"evals\":{}}}",
            fmt_json_number(self.nsirth_db),
            fmt_json_number(self.z),
            self.scenario,
            self.m,
            self.n,
            self.method,
            fmt_json_number(self.op),
            fmt_json_number(self.lcr_norm),
            fmt_json_number(self.afd_norm),
            self.evals
        )
    }
}

/// Render rows as CSV (with header) or JSON lines.
pub fn render(rows: &[Row], json: bool) -> String {
    let mut out = String::new();
    if !json {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for row in rows {
        out.push_str(&if json { row.json() } else { row.csv() });
        out.push('\n');
    }
    out
}

/// Relative output paths land in `$EGCSTAT_OUT_DIR` when it is set.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Write `text` to stdout or, when requested, to the resolved output file.
pub fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    match output {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}")))
        }
        Some(rel) => {
            let path = resolve_out_path(rel);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(|e| {
                        Failure::usage(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            std::fs::write(&path, text)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}
