use std::collections::BTreeMap;

use cliffqm_core::observables::ResidualStats;
use cliffqm_core::{Boundary, Particle};
use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Aborted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub counts: Vec<usize>,
    pub h: f64,
    pub boundary: Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSummary {
    pub index: usize,
    pub time: f64,
    pub frames: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub seeds: usize,
    pub truncated: usize,
    /// 1D runs only.
    pub order_preserved: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Diagnostics {
    pub norm_drift: Option<f64>,
    pub spin_norm_drift: Option<f64>,
    pub trajectories: Option<TrajectorySummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// `residuals.<name>` or `oracle_agreement.<name>`.
    pub statistic: String,
    pub max_abs: f64,
    pub c: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepLevel {
    pub level: usize,
    pub h: f64,
    pub dt: Option<f64>,
    pub max_abs: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub range: [f64; 2],
    pub slope: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub levels: Vec<SweepLevel>,
    /// `log2(e_l / e_{l+1})` for consecutive levels.
    pub log2_ratios: BTreeMap<String, Vec<f64>>,
    /// Least-squares slope of `ln e` against `ln h`.
    pub slopes: BTreeMap<String, f64>,
    pub slope_checks: BTreeMap<String, SlopeCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario: String,
    pub particle: Particle,
    pub status: RunStatus,
    pub abort_reason: Option<String>,
    pub grid: GridSummary,
    pub frame: Option<FrameSummary>,
    pub warnings: Vec<String>,
    pub residuals: BTreeMap<String, ResidualStats>,
    pub oracle_agreement: BTreeMap<String, ResidualStats>,
    pub diagnostics: Diagnostics,
    pub checks: BTreeMap<String, CheckResult>,
    pub sweep: Option<SweepSummary>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(scenario: &str, particle: Particle, grid: GridSummary) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            particle,
            status: RunStatus::Completed,
            abort_reason: None,
            grid,
            frame: None,
            warnings: Vec::new(),
            residuals: BTreeMap::new(),
            oracle_agreement: BTreeMap::new(),
            diagnostics: Diagnostics::default(),
            checks: BTreeMap::new(),
            sweep: None,
            pass: false,
        }
    }

    /// Looks up `residuals.<name>` or `oracle_agreement.<name>`.
    pub fn statistic(&self, name: &str) -> Option<(&'static str, &ResidualStats)> {
        if let Some(s) = self.residuals.get(name) {
            return Some(("residuals", s));
        }
        self.oracle_agreement.get(name).map(|s| ("oracle_agreement", s))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serialisable");
        s.push('\n');
        s
    }
}
