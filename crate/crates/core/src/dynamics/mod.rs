//! Unitary evolution of column wavefunctions and Bohm trajectory integration.

mod crank_nicolson;
mod split_step;
mod trajectories;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use trajectories::{integrate_trajectories, TrajectorySet};

use crank_nicolson::CrankNicolson;
use split_step::SplitStep;

use crate::error::{Error, Result};
use crate::grid::{Boundary, GridField, SnapshotSeries};
use crate::observables::pauli_current;
use crate::spinor::ColumnField;
use crate::vec3::Vec3;

/// Initial states must integrate to one within this tolerance.
pub const NORM_TOL: f64 = 1e-8;

/// Norm drift beyond this aborts the run.
pub const BLOWUP_DRIFT: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    CrankNicolson,
    SplitStep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub mass: f64,
    pub potential: Option<GridField<f64>>,
    pub dt: f64,
    pub steps: usize,
    /// Store a frame every this many steps (frame 0 is always stored).
    pub save_every: usize,
    pub scheme: Scheme,
}

impl EvolutionConfig {
    pub fn free(mass: f64, dt: f64, steps: usize) -> Self {
        Self {
            mass,
            potential: None,
            dt,
            steps,
            save_every: 1,
            scheme: Scheme::CrankNicolson,
        }
    }

    fn validate(&self, field: &ColumnField) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass {} must be positive", self.mass)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step {} must be positive", self.dt)));
        }
        if self.save_every == 0 {
            return Err(Error::InvalidParameter("save_every must be at least 1".into()));
        }
        if let Some(v) = &self.potential {
            if v.grid() != field.grid() {
                return Err(Error::GridMismatch("potential and state use different grids".into()));
            }
        }
        if self.scheme == Scheme::SplitStep && field.grid().boundary() != Boundary::Periodic {
            return Err(Error::InvalidParameter("split-step evolution needs a periodic grid".into()));
        }
        let norm = field.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("initial state has norm {norm}, expected 1")));
        }
        Ok(())
    }
}

/// Saved frames plus run diagnostics.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub series: SnapshotSeries<ColumnField>,
    /// Largest `|norm - 1|` seen at any saved frame.
    pub norm_drift: f64,
    pub warnings: Vec<String>,
}

enum Stepper {
    Cn(CrankNicolson),
    Fourier(SplitStep),
}

impl Stepper {
    fn step(&mut self, psi: &mut [Complex64]) {
        match self {
            Self::Cn(s) => s.step(psi),
            Self::Fourier(s) => s.step(psi),
        }
    }
}

/// Evolves every component of `field` under the same scalar Hamiltonian
/// `-lap/2m + V`.
pub fn evolve(field: &ColumnField, cfg: &EvolutionConfig) -> Result<Evolution> {
    cfg.validate(field)?;
    let grid = *field.grid();
    let mut warnings = Vec::new();
    let accuracy_bound = grid.h() * grid.h() * cfg.mass;
    if cfg.dt > accuracy_bound {
        warnings.push(format!(
            "dt = {} exceeds the accuracy bound h^2 m = {accuracy_bound:e}",
            cfg.dt
        ));
    }
    let v = cfg.potential.as_ref().map(|v| v.values());
    let mut steppers: Vec<Stepper> = field
        .components()
        .iter()
        .map(|_| match cfg.scheme {
            Scheme::CrankNicolson => Stepper::Cn(CrankNicolson::new(grid, cfg.mass, cfg.dt, v)),
            Scheme::SplitStep => Stepper::Fourier(SplitStep::new(grid, cfg.mass, cfg.dt, v)),
        })
        .collect();
    let mut state = field.clone();
    let mut frames = vec![state.clone()];
    let mut drift: f64 = 0.0;
    for n in 1..=cfg.steps {
        for (c, stepper) in state.components_mut().iter_mut().zip(&mut steppers) {
            stepper.step(c.values_mut());
        }
        if n % cfg.save_every == 0 || n == cfg.steps {
            let d = (state.norm() - 1.0).abs();
            if !d.is_finite() || d > BLOWUP_DRIFT {
                return Err(Error::NumericalBlowup { drift: d, step: n });
            }
            drift = drift.max(d);
            if n % cfg.save_every == 0 {
                frames.push(state.clone());
            }
        }
    }
    Ok(Evolution {
        series: SnapshotSeries::uniform(0.0, cfg.dt * cfg.save_every as f64, frames)?,
        norm_drift: drift,
        warnings,
    })
}

pub fn evolve_schrodinger(psi0: &GridField<Complex64>, cfg: &EvolutionConfig) -> Result<Evolution> {
    evolve(&ColumnField::scalar(psi0.clone()), cfg)
}

pub fn evolve_pauli(psi0: &ColumnField, cfg: &EvolutionConfig) -> Result<Evolution> {
    if !psi0.is_pauli() {
        return Err(Error::InvalidParameter("evolve_pauli needs a two-component field".into()));
    }
    evolve(psi0, cfg)
}

/// Bohm velocity `(J_conv + J_rot) / rho` for every frame.
pub fn velocity_series(series: &SnapshotSeries<ColumnField>, mass: f64) -> SnapshotSeries<GridField<Vec3>> {
    series.map(|f| pauli_current(f, mass).velocity)
}
