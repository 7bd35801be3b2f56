use cliffqm_core::dynamics::{evolve, integrate_trajectories, velocity_series, EvolutionConfig};
use cliffqm_core::grid::CsvTable;
use cliffqm_core::observables::{
    bohm_energy_weighted, bohm_momentum, bohm_momentum_weighted, evaluation_region, pauli_current, quantum_potential,
    spin_norm_drift, spin_vector_field, BohmObservables, ResidualStats, EVAL_THRESHOLD,
};
use cliffqm_core::oracle::{energy_density, messiah_current, momentum_density};
use cliffqm_core::{ColumnField, Error, GridField, SnapshotSeries, Vec3};

use crate::config::{seed_point, Check, Scenario};
use crate::error::CliError;
use crate::report::{CheckResult, FrameSummary, GridSummary, RunReport, RunStatus, TrajectorySummary};

/// Report plus the CSV bodies to export.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    pub fields_csv: Option<String>,
    pub trajectories_csv: Option<String>,
}

fn pointwise_gap<T: Copy>(fields: &[&GridField<T>], dist: impl Fn(T, T) -> f64) -> GridField<f64> {
    let grid = *fields[0].grid();
    GridField::from_index(grid, |i| {
        let mut worst: f64 = 0.0;
        for a in 0..fields.len() {
            for b in a + 1..fields.len() {
                worst = worst.max(dist(fields[a][i], fields[b][i]));
            }
        }
        worst
    })
}

fn vec_dist(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm_inf()
}

fn scalar_dist(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

fn grid_summary(s: &Scenario) -> GridSummary {
    GridSummary {
        counts: s.grid.axes().iter().map(|a| a.count).collect(),
        h: s.grid.h(),
        boundary: s.grid.boundary(),
    }
}

pub fn execute(s: &Scenario) -> Result<RunOutput, CliError> {
    let cfg = &s.config;
    let mut report = RunReport::new(&cfg.name, cfg.particle, grid_summary(s));
    let psi0 = cfg.state.sample_normalized(s.grid, cfg.particle, cfg.mass, 0.0)?;

    let series = match &cfg.evolution {
        Some(ev) => {
            let ecfg = EvolutionConfig {
                mass: cfg.mass,
                potential: s.potential.clone(),
                dt: ev.dt,
                steps: ev.steps,
                save_every: ev.save_every,
                scheme: ev.scheme,
            };
            match evolve(&psi0, &ecfg) {
                Ok(run) => {
                    report.warnings = run.warnings;
                    report.diagnostics.norm_drift = Some(run.norm_drift);
                    run.series
                }
                Err(e @ Error::NumericalBlowup { .. }) => {
                    report.status = RunStatus::Aborted;
                    report.abort_reason = Some(e.to_string());
                    report.pass = false;
                    return Ok(RunOutput {
                        report,
                        fields_csv: None,
                        trajectories_csv: None,
                    });
                }
                Err(e) => return Err(e.into()),
            }
        }
        None => SnapshotSeries::uniform(0.0, 1.0, vec![psi0])?,
    };

    let k = series.len() / 2;
    let frame: &ColumnField = series.frame(k);
    let dt = cfg.evolution.as_ref().map(|_| series.dt());
    report.frame = Some(FrameSummary {
        index: k,
        time: series.time(k),
        frames: series.len(),
    });
    let region = evaluation_region(frame, EVAL_THRESHOLD);
    let rho = frame.rho();

    let momentum = bohm_momentum(frame);
    let oracle_p = momentum_density(frame).zip_map(&rho, |p, r| *p * (1.0 / r));
    let p_gap = pointwise_gap(&[&momentum, &bohm_momentum_weighted(frame), &oracle_p], vec_dist);
    report.oracle_agreement.insert("momentum_triple".into(), ResidualStats::scalar(&p_gap, &region, dt));

    let q = quantum_potential(frame, cfg.mass)?;
    let currents = pauli_current(frame, cfg.mass);
    let m_gap = pointwise_gap(&[&messiah_current(frame, cfg.mass), &currents.total], vec_dist);
    report.oracle_agreement.insert("messiah_current".into(), ResidualStats::scalar(&m_gap, &region, dt));
    if frame.is_pauli() {
        let split = q.q1.zip_map(&q.q2, |a, b| a + b);
        let gap = pointwise_gap(&[&q.q, &split], scalar_dist);
        report.oracle_agreement.insert("q_split".into(), ResidualStats::scalar(&gap, &region, dt));
        let gap_w = pointwise_gap(&[&q.q_w, &split], scalar_dist);
        report.oracle_agreement.insert("q_w_split".into(), ResidualStats::scalar(&gap_w, &region, dt));
    }

    let mut table = CsvTable::new(s.grid)
        .scalar("rho", &rho)
        .vector("momentum", &momentum)
        .scalar("q", &q.q)
        .scalar("q1", &q.q1)
        .scalar("q2", &q.q2)
        .vector("velocity", &currents.velocity);
    if frame.is_pauli() {
        table = table.vector3("spin", &spin_vector_field(frame));
    }

    if cfg.evolution.is_some() {
        let obs = BohmObservables::compute(&series, k, cfg.mass, s.potential.as_ref())?;
        report.residuals = obs.report(&region);
        let oracle_e = energy_density(&series, k)?.zip_map(&rho, |e, r| e / r);
        let e_gap = pointwise_gap(&[&obs.energy, &bohm_energy_weighted(&series, k)?, &oracle_e], scalar_dist);
        report.oracle_agreement.insert("energy_triple".into(), ResidualStats::scalar(&e_gap, &region, dt));
        if frame.is_pauli() {
            report.diagnostics.spin_norm_drift = Some(spin_norm_drift(&series));
        }
        table = table.scalar("energy", &obs.energy);
        for (name, f) in &obs.scalar_residuals {
            table = table.scalar(&format!("residual_{name}"), f);
        }
        for (name, f) in &obs.vector_residuals {
            table = table.vector(&format!("residual_{name}"), f);
        }
    }

    let mut trajectories_csv = None;
    if let Some(tr) = &cfg.trajectories {
        let seeds: Vec<Vec3> = tr.seeds.iter().map(|p| seed_point(p)).collect();
        let set = integrate_trajectories(&velocity_series(&series, cfg.mass), &seeds, tr.dt)?;
        report.diagnostics.trajectories = Some(TrajectorySummary {
            seeds: seeds.len(),
            truncated: set.truncated.iter().filter(|t| **t).count(),
            order_preserved: (s.grid.dim() == 1).then(|| set.preserves_order()),
        });
        trajectories_csv = Some(set.to_csv(s.grid.dim()));
    }

    let h = s.grid.h();
    for (check, spec) in &cfg.checks {
        let name = check.name();
        let (section, stats) = report
            .statistic(name)
            .ok_or_else(|| CliError::Usage(format!("check {name} produced no statistic")))?;
        let bound = spec.bound(h);
        let result = CheckResult {
            statistic: format!("{section}.{name}"),
            max_abs: stats.max_abs,
            c: spec.c,
            bound,
            pass: stats.max_abs <= bound,
        };
        report.checks.insert(name.to_string(), result);
    }
    report.pass = report.status == RunStatus::Completed && report.checks.values().all(|c| c.pass);

    Ok(RunOutput {
        report,
        fields_csv: Some(table.to_csv()),
        trajectories_csv,
    })
}

/// Every check defined for the scenario, for sweeps.
pub fn check_names(s: &Scenario) -> Vec<Check> {
    s.config.checks.keys().copied().collect()
}
