use serde::{Deserialize, Serialize};

use super::fields::{
    bohm_momentum, euler_field, masked, quantum_potential, spin_field, valid_points, NAN3,
};
use crate::error::{Error, Result};
use crate::grid::{
    divergence, gradient, gradient_angle, laplacian, node_mask, partial, time_derivative, time_derivative_angle,
    GridField, SnapshotSeries, ANGLE_PERIOD,
};
use crate::spinor::ColumnField;
use crate::vec3::Vec3;

/// Default relative density below which points are left out of residual
/// statistics. Bohm fields in the far tails of a packet are dominated by
/// round-off in `psi`, so the statistics look only where the state lives.
pub const EVAL_THRESHOLD: f64 = 1e-3;

/// Below this `sin(theta)` the azimuth is treated as unidentifiable.
const POLE_SIN: f64 = 1e-6;

/// `E_B - P_B^2/2m - Q - V`.
pub fn qhj_residual(
    energy: &GridField<f64>,
    momentum: &GridField<Vec3>,
    q: &GridField<f64>,
    potential: Option<&GridField<f64>>,
    mass: f64,
) -> GridField<f64> {
    GridField::from_index(*energy.grid(), |i| {
        let v = potential.map_or(0.0, |v| v[i]);
        energy[i] - momentum[i].norm_sq() / (2.0 * mass) - q[i] - v
    })
}

fn density_window(series: &SnapshotSeries<ColumnField>, k: usize) -> Result<SnapshotSeries<GridField<f64>>> {
    Ok(series.window(k)?.map(|f| f.rho()))
}

/// `d_t rho + div(rho P_B / m)` at frame `k`.
pub fn continuity_residual(series: &SnapshotSeries<ColumnField>, k: usize, mass: f64) -> Result<GridField<f64>> {
    let drho = time_derivative(&density_window(series, k)?, 1)?;
    let now = series.frame(k);
    let rho = now.rho();
    let flux = bohm_momentum(now).zip_map(&rho, |p, r| *p * (*r / mass));
    let div = divergence(&flux);
    Ok(drho.zip_map(&div, |a, b| a + b))
}

fn spin_vectors(field: &ColumnField) -> GridField<Vec3> {
    spin_field(field).map(|s| s.vector_part())
}

fn require_pauli(field: &ColumnField, op: &'static str) -> Result<()> {
    if field.is_pauli() {
        Ok(())
    } else {
        Err(Error::Unsupported {
            op,
            signature: field.signature(),
        })
    }
}

/// `d_t s + (P_B . grad) s / m - (s/m) x [lap s + sum_k d_k ln(rho) d_k s]`.
pub fn spin_transport_residual(series: &SnapshotSeries<ColumnField>, k: usize, mass: f64) -> Result<GridField<Vec3>> {
    let now = series.frame(k);
    require_pauli(now, "spin_transport_residual")?;
    let s_win = series.window(k)?.map(spin_vectors);
    let ds = time_derivative(&s_win, 1)?;
    let s = s_win.frame(1);
    let p = bohm_momentum(now);
    let ln = now.rho().map(|r| r.ln());
    let lap = laplacian(s);
    let mut conv = GridField::from_index(*now.grid(), |_| Vec3::ZERO);
    let mut bracket = lap.clone();
    for a in 0..now.grid().dim() {
        let da = partial(s, a);
        let dln = partial(&ln, a);
        for i in 0..now.len() {
            conv.values_mut()[i] += da[i] * (p[i][a] / mass);
            bracket.values_mut()[i] += da[i] * dln[i];
        }
    }
    let res = GridField::from_index(*now.grid(), |i| ds[i] + conv[i] - s[i].cross(&bracket[i]) / mass);
    Ok(masked(res, &valid_points(now), NAN3))
}

/// Largest `| |s| - 1/2 |` over valid points of every frame.
pub fn spin_norm_drift(series: &SnapshotSeries<ColumnField>) -> f64 {
    let mut worst: f64 = 0.0;
    for f in series.frames() {
        if !f.is_pauli() {
            continue;
        }
        let valid = valid_points(f);
        for (s, ok) in spin_vectors(f).values().iter().zip(&valid) {
            if *ok {
                worst = worst.max((s.norm() - 0.5).abs());
            }
        }
    }
    worst
}

/// Terms of the Bohm force balance at frame `k`.
///
/// `dpdt = d_t P + grad(P^2)/2m`, `force = -grad Q - grad V`,
/// `torque = [d_t(cos theta) grad phi - grad(cos theta) d_t phi] / 2`, and
/// `residual = dpdt - force - torque`.
#[derive(Clone, Debug)]
pub struct Torque {
    pub dpdt: GridField<Vec3>,
    pub force: GridField<Vec3>,
    pub torque: GridField<Vec3>,
    pub residual: GridField<Vec3>,
}

pub fn quantum_torque(
    series: &SnapshotSeries<ColumnField>,
    k: usize,
    mass: f64,
    potential: Option<&GridField<f64>>,
) -> Result<Torque> {
    let win = series.window(k)?;
    let now = series.frame(k);
    let grid = *now.grid();
    let p_win = win.map(bohm_momentum);
    let dp = time_derivative(&p_win, 1)?;
    let p2 = p_win.frame(1).map(|p| p.norm_sq());
    let gp2 = gradient(&p2);
    let dpdt = dp.zip_map(&gp2, |a, b| *a + *b / (2.0 * mass));

    let q = quantum_potential(now, mass)?.q;
    let gq = gradient(&q);
    let gv = potential.map(gradient);
    let force = GridField::from_index(grid, |i| -gq[i] - gv.as_ref().map_or(Vec3::ZERO, |g| g[i]));

    let torque = if now.is_pauli() {
        let eulers = win.frames().iter().map(euler_field).collect::<Result<Vec<_>>>()?;
        let times = win.times().to_vec();
        let cos = SnapshotSeries::from_times(times.clone(), eulers.iter().map(|e| e.theta.map(|t| t.cos())).collect())?;
        let phis = SnapshotSeries::from_times(times, eulers.iter().map(|e| e.phi.clone()).collect())?;
        let dcos = time_derivative(&cos, 1)?;
        let dphi = time_derivative_angle(&phis, 1, ANGLE_PERIOD)?;
        let gcos = gradient(cos.frame(1));
        let gphi = gradient_angle(phis.frame(1), ANGLE_PERIOD);
        let theta = &eulers[1].theta;
        GridField::from_index(grid, |i| {
            let polar = theta[i] == 0.0 || theta[i] == std::f64::consts::PI;
            if theta[i].sin() < POLE_SIN && !polar {
                NAN3
            } else if polar {
                Vec3::ZERO
            } else {
                (gphi[i] * dcos[i] - gcos[i] * dphi[i]) * 0.5
            }
        })
    } else {
        GridField::from_index(grid, |_| Vec3::ZERO)
    };

    let residual = GridField::from_index(grid, |i| dpdt[i] - force[i] - torque[i]);
    Ok(Torque {
        dpdt,
        force,
        torque,
        residual,
    })
}

/// Residual summary over the evaluation region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max_abs: f64,
    pub l2: f64,
    pub masked_fraction: f64,
    pub grid: StatsGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsGrid {
    pub h: f64,
    pub dt: Option<f64>,
}

/// Interior points with `rho >= threshold * max(rho)`.
pub fn evaluation_region(field: &ColumnField, threshold: f64) -> Vec<bool> {
    let grid = field.grid();
    node_mask(&field.rho(), threshold)
        .into_iter()
        .enumerate()
        .map(|(i, ok)| ok && grid.is_interior(i))
        .collect()
}

impl ResidualStats {
    /// Statistics of `|r|` over `region`, skipping non-finite values.
    pub fn from_values(grid_field: &GridField<f64>, region: &[bool], dt: Option<f64>) -> Self {
        let grid = grid_field.grid();
        let mut max_abs: f64 = 0.0;
        let mut sum = 0.0;
        let mut used = 0usize;
        for (v, ok) in grid_field.values().iter().zip(region) {
            if *ok && v.is_finite() {
                max_abs = max_abs.max(v.abs());
                sum += v * v;
                used += 1;
            }
        }
        Self {
            max_abs,
            l2: (sum * grid.cell_volume()).sqrt(),
            masked_fraction: 1.0 - used as f64 / grid.len() as f64,
            grid: StatsGrid { h: grid.h(), dt },
        }
    }

    pub fn scalar(f: &GridField<f64>, region: &[bool], dt: Option<f64>) -> Self {
        Self::from_values(f, region, dt)
    }

    /// Uses the largest component magnitude at each point.
    pub fn vector(f: &GridField<Vec3>, region: &[bool], dt: Option<f64>) -> Self {
        Self::from_values(&f.map(|v| if v.is_finite() { v.norm_inf() } else { f64::NAN }), region, dt)
    }
}
