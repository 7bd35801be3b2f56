use std::collections::BTreeMap;
use std::fmt::Write;
use std::thread;

use cliffqm_core::grid::fmt_float;

use crate::config::Scenario;
use crate::error::CliError;
use crate::report::{SlopeCheck, SweepLevel, SweepSummary};
use crate::runner::{check_names, execute, RunOutput};

pub const MIN_LEVELS: usize = 3;

/// Least-squares slope of `ln e` against `ln h`.
pub fn fit_slope(hs: &[f64], es: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Runs `levels` refinements concurrently. Returns the finest run with the
/// sweep attached to its report.
pub fn sweep(s: &Scenario, levels: usize) -> Result<RunOutput, CliError> {
    if levels < MIN_LEVELS {
        return Err(CliError::Usage(format!("a sweep needs at least {MIN_LEVELS} levels, got {levels}")));
    }
    let scenarios: Vec<Scenario> = (0..levels).map(|l| s.refined(l as u32)).collect();
    let runs: Vec<Result<RunOutput, CliError>> = thread::scope(|scope| {
        let handles: Vec<_> = scenarios.iter().map(|sc| scope.spawn(move || execute(sc))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep level panicked")).collect()
    });
    let runs: Vec<RunOutput> = runs.into_iter().collect::<Result<_, _>>()?;

    let names: Vec<&str> = check_names(s).iter().map(|c| c.name()).collect();
    let mut table = Vec::with_capacity(levels);
    for (l, run) in runs.iter().enumerate() {
        let mut max_abs = BTreeMap::new();
        for name in &names {
            if let Some((_, st)) = run.report.statistic(name) {
                max_abs.insert(name.to_string(), st.max_abs);
            }
        }
        table.push(SweepLevel {
            level: l,
            h: scenarios[l].grid.h(),
            dt: scenarios[l].config.evolution.as_ref().map(|e| e.dt),
            max_abs,
        });
    }

    let mut log2_ratios = BTreeMap::new();
    let mut slopes = BTreeMap::new();
    let mut slope_checks = BTreeMap::new();
    let hs: Vec<f64> = table.iter().map(|l| l.h).collect();
    for name in &names {
        let es: Vec<f64> = table.iter().filter_map(|l| l.max_abs.get(*name).copied()).collect();
        if es.len() != levels {
            continue;
        }
        log2_ratios.insert(name.to_string(), es.windows(2).map(|w| (w[0] / w[1]).log2()).collect());
        let slope = fit_slope(&hs, &es);
        slopes.insert(name.to_string(), slope);
        let spec = s.config.checks.iter().find(|(c, _)| c.name() == *name).map(|(_, sp)| sp);
        if let Some(range) = spec.and_then(|sp| sp.slope) {
            let pass = slope >= range[0] && slope <= range[1];
            slope_checks.insert(name.to_string(), SlopeCheck { range, slope, pass });
        }
    }

    let mut finest = runs.into_iter().next_back().expect("at least three levels");
    finest.report.pass &= slope_checks.values().all(|c| c.pass);
    finest.report.sweep = Some(SweepSummary {
        levels: table,
        log2_ratios,
        slopes,
        slope_checks,
    });
    Ok(finest)
}

/// `level,h,dt,<stat>...` rows.
pub fn sweep_csv(summary: &SweepSummary) -> String {
    let names: Vec<&String> = summary.slopes.keys().collect();
    let mut out = String::from("level,h,dt");
    for n in &names {
        write!(out, ",{n}").unwrap();
    }
    out.push('\n');
    for l in &summary.levels {
        write!(out, "{},{},{}", l.level, fmt_float(l.h), l.dt.map_or(String::new(), fmt_float)).unwrap();
        for n in &names {
            write!(out, ",{}", fmt_float(l.max_abs[*n])).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let hs = [0.4, 0.2, 0.1];
        let es: Vec<f64> = hs.iter().map(|h: &f64| 3.0 * h.powi(2)).collect();
        assert!((fit_slope(&hs, &es) - 2.0).abs() < 1e-12);
    }
}
