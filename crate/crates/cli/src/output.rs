//! Artifact writers. Files are written to a temporary sibling and renamed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use torus_stratum::kernels::{CanonicalEntry, ImageComparison};
use torus_stratum::spectra::theta_grid;
use torus_stratum::validation::ValidationReport;
use torus_stratum::EquilibriumSolution;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip text, switching to exponent form for tiny or huge values.
struct Num(f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
pub struct SolutionFile {
    pub schema_version: u32,
    pub solution: EquilibriumSolution,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    schema_version: u32,
    report: &'a ValidationReport,
}

pub fn write_solution(dir: &Path, sol: &EquilibriumSolution) -> Result<(), CliError> {
    let file = SolutionFile {
        schema_version: SCHEMA_VERSION,
        solution: sol.clone(),
    };
    write_atomic(&dir.join("solution.json"), &to_json(&file))?;
    write_atomic(&dir.join("profiles.csv"), &profiles_csv(sol))
}

pub fn read_solution(path: &Path) -> Result<EquilibriumSolution, CliError> {
    let file = if path.is_dir() { path.join("solution.json") } else { path.to_path_buf() };
    let text = fs::read_to_string(&file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    let parsed: SolutionFile =
        serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    if parsed.schema_version != SCHEMA_VERSION {
        return Err(CliError::Io(format!(
            "{}: schema version {} is not {SCHEMA_VERSION}",
            file.display(),
            parsed.schema_version
        )));
    }
    Ok(parsed.solution)
}

/// `θ, r, ω, s, Ω` on `4N + 1` equispaced points.
pub fn profiles_csv(sol: &EquilibriumSolution) -> String {
    let cfg = &sol.torus;
    let mut out = format!("# torus-solver profiles schema {SCHEMA_VERSION}\ntheta,r,omega,s,Omega\n");
    for t in theta_grid(4 * sol.state.modes() + 1) {
        let r = cfg.r0 * sol.state.radius_ratio(cfg.epsilon, t);
        let om = cfg.omega0 * sol.state.rate_ratio(cfg.epsilon, t);
        let _ = writeln!(out, "{},{},{},{},{}", Num(t), Num(r), Num(om), Num(sol.s.eval(t)), Num(sol.omega.eval(t)));
    }
    out
}

/// One row of `sweep.csv`.
pub struct SweepRow {
    pub epsilon: f64,
    pub status: String,
    pub solution: Option<EquilibriumSolution>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!(
        "# torus-solver sweep schema {SCHEMA_VERSION}\n\
         epsilon,status,rho_norm,w_deviation,s_deviation_over_eps,omega_log_scaled,iterations,contraction_ratio\n"
    );
    for row in rows {
        match &row.solution {
            Some(s) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    Num(row.epsilon),
                    row.status,
                    Num(s.rho_norm()),
                    Num(s.w_deviation()),
                    Num(s.s_deviation_over_eps()),
                    Num(s.omega_log_scaled()),
                    s.diagnostics.iterations,
                    Num(s.diagnostics.contraction_ratio)
                );
            }
            None => {
                let _ = writeln!(out, "{},{},,,,,,", Num(row.epsilon), row.status);
            }
        }
    }
    out
}

pub fn report_json(report: &ValidationReport) -> String {
    to_json(&ReportFile {
        schema_version: SCHEMA_VERSION,
        report,
    })
}

pub fn report_csv(report: &ValidationReport) -> String {
    let mut out = format!("# torus-solver validation schema {SCHEMA_VERSION}\nname,value,tolerance,pass\n");
    for c in &report.checks {
        let _ = writeln!(out, "{},{},{},{}", c.name, Num(c.value), Num(c.tolerance), c.pass);
    }
    out
}

pub fn report_table(report: &ValidationReport) -> String {
    let mut out = format!("{:<28} {:>14} {:>14}  result\n", "check", "value", "tolerance");
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{:<28} {:>14.4e} {:>14.4e}  {}",
            c.name,
            c.value,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}

pub fn k3_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = format!("# torus-solver K3 schema {SCHEMA_VERSION}\nepsilon,K3,K3_over_log,error_estimate\n");
    for &(eps, value, err) in rows {
        let _ = writeln!(out, "{},{},{},{}", Num(eps), Num(value), Num(value / (1.0 + (1.0 / eps).ln())), Num(err));
    }
    out
}

pub fn canonical_csv(rows: &[CanonicalEntry]) -> String {
    let mut out = format!("# torus-solver canonical schema {SCHEMA_VERSION}\nname,parameter,computed,exact,abs_error\n");
    for r in rows {
        let _ = writeln!(out, "\"{}\",{},{},{},{}", r.name, Num(r.parameter), Num(r.computed), Num(r.exact), Num(r.abs_error()));
    }
    out
}

pub fn images_csv(rows: &[ImageComparison]) -> String {
    let mut out = format!(
        "# torus-solver images schema {SCHEMA_VERSION}\nepsilon,operator,mode,input,computed,image,rel_error,error_estimate\n"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            Num(r.epsilon),
            r.operator,
            r.mode,
            r.input,
            Num(r.computed),
            Num(r.image),
            Num(r.rel_error()),
            Num(r.error_estimate)
        );
    }
    out
}

#[derive(Serialize)]
pub struct KernelTables<'a> {
    pub schema_version: u32,
    pub k3: Vec<(f64, f64, f64)>,
    pub canonical: &'a [CanonicalEntry],
    pub images: &'a [ImageComparison],
}

pub fn kernels_json(tables: &KernelTables) -> String {
    to_json(tables)
}
