//! Bilinear invariants and Bohm fields computed from sampled spinor fields,
//! plus the residuals of the equations they are expected to satisfy.
//!
//! Every function masks density nodes with `NaN`.

mod fields;
mod residuals;

use std::collections::BTreeMap;

pub use fields::{
    bohm_energy, bohm_energy_euler, bohm_energy_weighted, bohm_momentum, bohm_momentum_euler, bohm_momentum_weighted,
    euler_field, expectation, momentum_from_omega, momentum_remainder, omega_fields, pauli_current,
    quantum_potential, rotor_field, spin_bivector_field, spin_dual, spin_field, spin_vector_field, valid_points,
    w_field, Currents, EulerField, OmegaField, QuantumPotential,
};
pub use residuals::{
    continuity_residual, evaluation_region, qhj_residual, quantum_torque, spin_norm_drift, spin_transport_residual,
    ResidualStats, StatsGrid, Torque, EVAL_THRESHOLD,
};

use crate::algebra::Multivector;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridField, SnapshotSeries};
use crate::spinor::ColumnField;
use crate::vec3::Vec3;

/// Every Bohm field at one frame of an evolution, with named residuals.
#[derive(Clone, Debug)]
pub struct BohmObservables {
    pub grid: Grid,
    pub time: f64,
    pub dt: f64,
    pub mass: f64,
    pub rho: GridField<f64>,
    pub momentum: GridField<Vec3>,
    pub energy: GridField<f64>,
    pub potential: QuantumPotential,
    pub w: Vec<GridField<Multivector>>,
    pub spin: GridField<Vec3>,
    pub currents: Currents,
    pub valid: Vec<bool>,
    pub scalar_residuals: BTreeMap<String, GridField<f64>>,
    pub vector_residuals: BTreeMap<String, GridField<Vec3>>,
}

impl BohmObservables {
    /// Fields at interior frame `k`. `potential` defaults to zero.
    pub fn compute(
        series: &SnapshotSeries<ColumnField>,
        k: usize,
        mass: f64,
        potential: Option<&GridField<f64>>,
    ) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass {mass} must be positive")));
        }
        let now = series.frame(k);
        if let Some(v) = potential {
            if v.grid() != now.grid() {
                return Err(Error::GridMismatch("potential and state use different grids".into()));
            }
        }
        let momentum = bohm_momentum(now);
        let energy = bohm_energy(series, k)?;
        let q = quantum_potential(now, mass)?;
        let rho = now.rho();
        let w = w_field(&rho, &spin_bivector_field(now));
        let mut scalar_residuals = BTreeMap::new();
        scalar_residuals.insert("qhj".to_string(), qhj_residual(&energy, &momentum, &q.q, potential, mass));
        scalar_residuals.insert("continuity".to_string(), continuity_residual(series, k, mass)?);
        let mut vector_residuals = BTreeMap::new();
        vector_residuals.insert("torque".to_string(), quantum_torque(series, k, mass, potential)?.residual);
        if now.is_pauli() {
            vector_residuals.insert("spin_transport".to_string(), spin_transport_residual(series, k, mass)?);
        }
        Ok(Self {
            grid: *now.grid(),
            time: series.time(k),
            dt: series.dt(),
            mass,
            rho,
            momentum,
            energy,
            potential: q,
            w,
            spin: spin_vector_field(now),
            currents: pauli_current(now, mass),
            valid: valid_points(now),
            scalar_residuals,
            vector_residuals,
        })
    }

    /// Residual statistics over `region`.
    pub fn report(&self, region: &[bool]) -> BTreeMap<String, ResidualStats> {
        let dt = Some(self.dt);
        let mut out = BTreeMap::new();
        for (name, f) in &self.scalar_residuals {
            out.insert(name.clone(), ResidualStats::scalar(f, region, dt));
        }
        for (name, f) in &self.vector_residuals {
            out.insert(name.clone(), ResidualStats::vector(f, region, dt));
        }
        out
    }
}

#[cfg(test)]
mod tests;
