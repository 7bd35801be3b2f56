//! Scenario files: TOML with a `schema_version` key.
//!
//! ```toml
//! schema_version = 1
//! name = "schrodinger_gaussian"
//! description = "free packet"
//! particle = "schrodinger"      # or "pauli"
//! mass = 1.0
//!
//! [grid]
//! boundary = "clamped"          # or "periodic"
//! axes = [{ min = -20.0, max = 20.0, count = 401 }]
//!
//! [state]                       # any `StateDescriptor`
//! kind = "gaussian"
//! center = [-2.0]
//! sigma = 1.0
//! k = [1.0]
//!
//! [potential]
//! kind = "none"                 # "harmonic" (omega) or "table" (file)
//!
//! [evolution]                   # omit for a static snapshot
//! dt = 0.005
//! steps = 200
//! save_every = 2
//! scheme = "crank-nicolson"     # or "split-step"
//!
//! [trajectories]
//! dt = 0.01
//! seeds = [[-3.0], [-2.0]]
//!
//! [checks.qhj]                  # max_abs <= 5 c h^2
//! c = 0.5
//! slope = [1.8, 2.2]            # used by `sweep`
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cliffqm_core::scenario::harmonic_potential;
use cliffqm_core::{Axis, Boundary, Grid, GridField, Particle, Scheme, StateDescriptor};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub particle: Particle,
    #[serde(default = "unit_mass")]
    pub mass: f64,
    pub grid: GridSpec,
    pub state: StateDescriptor,
    #[serde(default)]
    pub potential: PotentialSpec,
    #[serde(default)]
    pub evolution: Option<EvolutionSpec>,
    #[serde(default)]
    pub trajectories: Option<TrajectorySpec>,
    #[serde(default)]
    pub checks: BTreeMap<Check, CheckSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

fn unit_mass() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub boundary: Boundary,
    pub axes: Vec<AxisSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    #[default]
    None,
    /// `m omega^2 r^2 / 2`.
    Harmonic { omega: f64 },
    /// Whitespace-separated `x [y z] V` rows in grid order, path relative
    /// to the config file.
    Table { file: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSpec {
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "one")]
    pub save_every: usize,
    #[serde(default)]
    pub scheme: Scheme,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    pub dt: f64,
    pub seeds: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

/// Named pass/fail checks a scenario may enable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Qhj,
    Continuity,
    Torque,
    SpinTransport,
    MomentumTriple,
    EnergyTriple,
    QSplit,
    MessiahCurrent,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Qhj,
        Check::Continuity,
        Check::Torque,
        Check::SpinTransport,
        Check::MomentumTriple,
        Check::EnergyTriple,
        Check::QSplit,
        Check::MessiahCurrent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Qhj => "qhj",
            Check::Continuity => "continuity",
            Check::Torque => "torque",
            Check::SpinTransport => "spin_transport",
            Check::MomentumTriple => "momentum_triple",
            Check::EnergyTriple => "energy_triple",
            Check::QSplit => "q_split",
            Check::MessiahCurrent => "messiah_current",
        }
    }

    /// Needs at least three saved frames.
    pub fn needs_time(self) -> bool {
        matches!(self, Check::Qhj | Check::Continuity | Check::Torque | Check::SpinTransport | Check::EnergyTriple)
    }

    pub fn needs_pauli(self) -> bool {
        matches!(self, Check::SpinTransport | Check::QSplit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    /// Calibrated constant in `max_abs <= 5 c h^2`.
    pub c: f64,
    /// Accepted convergence-slope range for `sweep`.
    #[serde(default)]
    pub slope: Option<[f64; 2]>,
}

impl CheckSpec {
    pub fn bound(&self, h: f64) -> f64 {
        5.0 * self.c * h * h
    }
}

/// A validated config with its resolved grid and potential.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub path: PathBuf,
    pub grid: Grid,
    pub potential: Option<GridField<f64>>,
}

/// 1-based line of `key` inside `[section]` (or of the header itself), or of
/// a top-level key when `section` is empty.
pub fn locate(text: &str, section: &str, key: Option<&str>) -> usize {
    let mut in_section = section.is_empty();
    let mut header_line = 1;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            let name = line.trim_start_matches('[').trim_end_matches(']').trim();
            in_section = name == section || name.starts_with(&format!("{section}."));
            if name == section {
                header_line = n + 1;
            }
            continue;
        }
        if in_section {
            if let Some(k) = key {
                let starts = line.strip_prefix(k).map(|rest| rest.trim_start().starts_with('='));
                if starts == Some(true) {
                    return n + 1;
                }
            }
        }
    }
    header_line
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let cfg_err = |line: usize, message: String| CliError::Config {
            path: path.to_path_buf(),
            line,
            message,
        };
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(1, |s| line_of_offset(text, s.start));
            cfg_err(line, e.message().to_string())
        })?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(cfg_err(
                locate(text, "", Some("schema_version")),
                format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", config.schema_version),
            ));
        }
        if config.name.is_empty() || config.name.contains(['/', '\\']) {
            return Err(cfg_err(locate(text, "", Some("name")), "name must be a non-empty file name".into()));
        }
        if !(config.mass > 0.0) {
            return Err(cfg_err(locate(text, "", Some("mass")), format!("mass {} must be positive", config.mass)));
        }
        let axes: Vec<Axis> = config.grid.axes.iter().map(|a| Axis::new(a.min, a.max, a.count)).collect();
        let grid = Grid::new(&axes, config.grid.boundary).map_err(|e| cfg_err(locate(text, "grid", Some("axes")), e.to_string()))?;
        config
            .state
            .validate(&grid, config.particle)
            .map_err(|e| cfg_err(locate(text, "state", None), e.to_string()))?;

        let potential = match &config.potential {
            PotentialSpec::None => None,
            PotentialSpec::Harmonic { omega } => {
                if !(*omega > 0.0) {
                    return Err(cfg_err(locate(text, "potential", Some("omega")), format!("omega {omega} must be positive")));
                }
                Some(harmonic_potential(grid, config.mass, *omega))
            }
            PotentialSpec::Table { file } => {
                let full = path.parent().unwrap_or(Path::new(".")).join(file);
                let line = locate(text, "potential", Some("file"));
                let body = fs::read_to_string(&full).map_err(|e| cfg_err(line, format!("cannot read {}: {e}", full.display())))?;
                Some(read_potential_table(&body, grid).map_err(|m| cfg_err(line, format!("{}: {m}", full.display())))?)
            }
        };

        if let Some(ev) = &config.evolution {
            if !(ev.dt > 0.0) || !ev.dt.is_finite() {
                return Err(cfg_err(locate(text, "evolution", Some("dt")), format!("dt {} must be positive", ev.dt)));
            }
            if ev.save_every == 0 {
                return Err(cfg_err(locate(text, "evolution", Some("save_every")), "save_every must be at least 1".into()));
            }
            if ev.steps / ev.save_every < 2 {
                return Err(cfg_err(
                    locate(text, "evolution", Some("steps")),
                    "evolution must save at least three frames (steps >= 2 * save_every)".into(),
                ));
            }
            if ev.scheme == Scheme::SplitStep && grid.boundary() != Boundary::Periodic {
                return Err(cfg_err(locate(text, "evolution", Some("scheme")), "split-step needs a periodic grid".into()));
            }
        }
        if let Some(tr) = &config.trajectories {
            let line = locate(text, "trajectories", Some("seeds"));
            if config.evolution.is_none() {
                return Err(cfg_err(line, "trajectories need an [evolution] section".into()));
            }
            if !(tr.dt > 0.0) {
                return Err(cfg_err(locate(text, "trajectories", Some("dt")), format!("dt {} must be positive", tr.dt)));
            }
            for (i, s) in tr.seeds.iter().enumerate() {
                if s.len() != grid.dim() {
                    return Err(cfg_err(line, format!("seed {i} has {} coordinates, grid has {}", s.len(), grid.dim())));
                }
                if !grid.contains(seed_point(s)) {
                    return Err(cfg_err(line, format!("seed {i} lies outside the grid")));
                }
            }
        }
        for (check, spec) in &config.checks {
            let line = locate(text, &format!("checks.{}", check.name()), None);
            if !(spec.c > 0.0) {
                return Err(cfg_err(line, format!("check {}: c must be positive", check.name())));
            }
            if check.needs_time() && config.evolution.is_none() {
                return Err(cfg_err(line, format!("check {} needs an [evolution] section", check.name())));
            }
            if check.needs_pauli() && config.particle != Particle::Pauli {
                return Err(cfg_err(line, format!("check {} needs particle = \"pauli\"", check.name())));
            }
        }
        Ok(Self {
            config,
            path: path.to_path_buf(),
            grid,
            potential,
        })
    }

    /// Same scenario with `h` halved `level` times, `dt` scaled with `h^2`
    /// and the frame spacing with `h`.
    pub fn refined(&self, level: u32) -> Self {
        let factor = 1usize << level;
        let mut out = self.clone();
        out.grid = self.grid.refined(factor);
        let c = &mut out.config;
        for a in &mut c.grid.axes {
            a.count = match c.grid.boundary {
                Boundary::Clamped => (a.count - 1) * factor + 1,
                Boundary::Periodic => a.count * factor,
            };
        }
        if let Some(ev) = &mut c.evolution {
            ev.dt /= (factor * factor) as f64;
            ev.steps *= factor * factor;
            ev.save_every *= factor;
        }
        out.potential = match &c.potential {
            PotentialSpec::None => None,
            PotentialSpec::Harmonic { omega } => Some(harmonic_potential(out.grid, c.mass, *omega)),
            PotentialSpec::Table { .. } => self.potential.as_ref().map(|v| {
                GridField::from_fn(out.grid, |p| v.interpolate(p).unwrap_or(f64::NAN))
            }),
        };
        out
    }
}

pub fn seed_point(s: &[f64]) -> cliffqm_core::Vec3 {
    let mut p = [0.0; 3];
    p[..s.len()].copy_from_slice(s);
    cliffqm_core::Vec3(p)
}

/// Parses `x [y z] V` rows; `#` starts a comment.
pub fn read_potential_table(text: &str, grid: Grid) -> Result<GridField<f64>, String> {
    let dim = grid.dim();
    let mut values = Vec::with_capacity(grid.len());
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let nums = nums.map_err(|e| format!("line {}: {e}", n + 1))?;
        if nums.len() != dim + 1 {
            return Err(format!("line {}: expected {} columns, found {}", n + 1, dim + 1, nums.len()));
        }
        let i = values.len();
        if i >= grid.len() {
            return Err(format!("line {}: more rows than grid points ({})", n + 1, grid.len()));
        }
        let p = grid.point(i);
        for a in 0..dim {
            if (nums[a] - p[a]).abs() > 1e-6 * grid.spacing(a) {
                return Err(format!("line {}: coordinate {} does not match grid point {}", n + 1, nums[a], p[a]));
            }
        }
        values.push(nums[dim]);
    }
    if values.len() != grid.len() {
        return Err(format!("expected {} rows, found {}", grid.len(), values.len()));
    }
    GridField::new(grid, values).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"schema_version = 1
name = "t"
particle = "schrodinger"

[grid]
boundary = "clamped"
axes = [{ min = -10.0, max = 10.0, count = 101 }]

[state]
kind = "gaussian"
center = [0.0]
sigma = 1.0
"#;

    fn parse(text: &str) -> Result<Scenario, CliError> {
        Scenario::parse(text, Path::new("t.cfg"))
    }

    fn error_line(text: &str) -> usize {
        match parse(text) {
            Err(CliError::Config { line, .. }) => line,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_parses() {
        let s = parse(MINIMAL).unwrap();
        assert_eq!(s.grid.len(), 101);
        assert!(s.potential.is_none());
        assert!(s.config.checks.is_empty());
    }

    #[test]
    fn syntax_error_has_line() {
        let bad = MINIMAL.replace("sigma = 1.0", "sigma = = 1.0");
        assert_eq!(error_line(&bad), 12);
    }

    #[test]
    fn semantic_errors_point_at_the_key() {
        assert_eq!(error_line(&MINIMAL.replace("schema_version = 1", "schema_version = 7")), 1);
        let wide = MINIMAL.replace("sigma = 1.0", "sigma = 3.0");
        assert_eq!(error_line(&wide), 9);
        let checks = format!("{MINIMAL}\n[checks.qhj]\nc = 1.0\n");
        assert_eq!(error_line(&checks), 14);
        let spin = format!("{MINIMAL}\n[evolution]\ndt = 0.01\nsteps = 10\n\n[checks.spin_transport]\nc = 1.0\n");
        assert_eq!(error_line(&spin), 18);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert_eq!(error_line(&MINIMAL.replace("particle", "particel")), 3);
    }

    #[test]
    fn refinement_halves_h_and_quarters_dt() {
        let text = format!("{MINIMAL}\n[potential]\nkind = \"harmonic\"\nomega = 1.0\n\n[evolution]\ndt = 0.01\nsteps = 10\nsave_every = 2\n");
        let s = parse(&text).unwrap();
        let r = s.refined(2);
        assert_eq!(r.grid.len(), 401);
        assert!((r.grid.h() - s.grid.h() / 4.0).abs() < 1e-15);
        let ev = r.config.evolution.unwrap();
        assert_eq!((ev.steps, ev.save_every), (160, 8));
        assert!((ev.dt - 0.01 / 16.0).abs() < 1e-18);
        assert_eq!(r.potential.unwrap().len(), 401);
    }

    #[test]
    fn potential_tables() {
        let g = Grid::line(0.0, 1.0, 5, Boundary::Clamped).unwrap();
        let v = read_potential_table("# x V\n0 1\n0.25 2\n0.5 3 # mid\n0.75 4\n1.0 5\n", g).unwrap();
        assert_eq!(v.values(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(read_potential_table("0 1\n0.2 2\n", g).unwrap_err().contains("line 2"));
        assert!(read_potential_table("0 1\n", g).unwrap_err().contains("expected 5 rows"));
        assert!(read_potential_table("0 1 2\n", g).unwrap_err().contains("expected 2 columns"));
    }
}
