//! Scenario runner behind the `cliffqm` binary: reads a scenario file,
//! evolves the state, computes Bohm observables and residuals, and writes
//! `fields.csv`, `trajectories.csv` and `report.json`.

pub mod bundle;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{Check, Scenario, ScenarioConfig};
pub use error::CliError;
pub use report::RunReport;
pub use runner::{execute, RunOutput};

/// Environment variable naming the default output root.
pub const OUTPUT_ROOT_ENV: &str = "CLIFFQM_OUTPUT_ROOT";
pub const DEFAULT_OUTPUT_ROOT: &str = "cliffqm-out";

/// `--out`, else the config's `[output] dir`, else `<root>/<name>`.
pub fn output_dir(s: &Scenario, out: Option<&Path>, root: Option<&Path>) -> PathBuf {
    if let Some(o) = out {
        return o.to_path_buf();
    }
    if let Some(o) = &s.config.output {
        return o.dir.clone();
    }
    root.unwrap_or(Path::new(DEFAULT_OUTPUT_ROOT)).join(&s.config.name)
}

pub fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// Writes every artifact of `run` into `dir`.
pub fn export(run: &RunOutput, dir: &Path, extra: &[(&str, String)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    if let Some(f) = &run.fields_csv {
        written.push(write_file(dir, "fields.csv", f)?);
    }
    if let Some(t) = &run.trajectories_csv {
        written.push(write_file(dir, "trajectories.csv", t)?);
    }
    for (name, body) in extra {
        written.push(write_file(dir, name, body)?);
    }
    written.push(write_file(dir, "report.json", &run.report.to_json())?);
    Ok(written)
}

/// Human-readable summary lines.
pub fn summary(report: &RunReport) -> Vec<String> {
    let mut lines = vec![format!("scenario {} ({:?}, h = {:e})", report.scenario, report.status, report.grid.h)];
    if let Some(r) = &report.abort_reason {
        lines.push(format!("aborted: {r}"));
    }
    for w in &report.warnings {
        lines.push(format!("warning: {w}"));
    }
    for (name, c) in &report.checks {
        lines.push(format!(
            "{} {name}: max_abs {:.3e} <= {:.3e} (c = {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.max_abs,
            c.bound,
            c.c
        ));
    }
    if let Some(sw) = &report.sweep {
        for (name, slope) in &sw.slopes {
            let verdict = match sw.slope_checks.get(name) {
                Some(c) if c.pass => format!("PASS (range {:?})", c.range),
                Some(c) => format!("FAIL (range {:?})", c.range),
                None => "info".to_string(),
            };
            lines.push(format!("slope {name}: {slope:.3} {verdict} log2 ratios {:?}", sw.log2_ratios[name]));
        }
    }
    lines.push(if report.pass { "PASS".into() } else { "FAIL".into() });
    lines
}
