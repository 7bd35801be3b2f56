use num_complex::Complex64;

use super::{ColumnSpinor, IdealSpinor};
use crate::algebra::Signature;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridField};
use crate::vec3::Vec3;

/// Column wavefunction sampled on a grid: one component for Schrodinger
/// states, two for Pauli states.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnField {
    components: Vec<GridField<Complex64>>,
}

impl ColumnField {
    pub fn scalar(psi: GridField<Complex64>) -> Self {
        Self { components: vec![psi] }
    }

    pub fn pair(psi1: GridField<Complex64>, psi2: GridField<Complex64>) -> Result<Self> {
        if psi1.grid() != psi2.grid() {
            return Err(Error::GridMismatch("spinor components live on different grids".into()));
        }
        Ok(Self {
            components: vec![psi1, psi2],
        })
    }

    pub fn from_components(components: Vec<GridField<Complex64>>) -> Result<Self> {
        match components.len() {
            1 => Ok(Self { components }),
            2 => {
                let mut it = components.into_iter();
                let a = it.next().unwrap();
                Self::pair(a, it.next().unwrap())
            }
            n => Err(Error::InvalidParameter(format!("a column field has 1 or 2 components, got {n}"))),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Vec3) -> ColumnSpinor) -> Result<Self> {
        let probe = grid.points().next().map(&f);
        match probe {
            Some(ColumnSpinor::Pair(..)) => {
                let pick = |k: usize| {
                    GridField::from_fn(grid, |p| match f(p) {
                        ColumnSpinor::Pair(a, b) => [a, b][k],
                        ColumnSpinor::Scalar(a) => [a, Complex64::new(0.0, 0.0)][k],
                    })
                };
                Self::pair(pick(0), pick(1))
            }
            _ => Ok(Self::scalar(GridField::from_fn(grid, |p| match f(p) {
                ColumnSpinor::Scalar(a) | ColumnSpinor::Pair(a, _) => a,
            }))),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn signature(&self) -> Signature {
        if self.is_pauli() {
            Signature::PAULI
        } else {
            Signature::SCHRODINGER
        }
    }

    pub fn is_pauli(&self) -> bool {
        self.components.len() == 2
    }

    pub fn components(&self) -> &[GridField<Complex64>] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [GridField<Complex64>] {
        &mut self.components
    }

    pub fn into_components(self) -> Vec<GridField<Complex64>> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.grid().len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid().is_empty()
    }

    pub fn column(&self, i: usize) -> ColumnSpinor {
        match self.components.as_slice() {
            [a] => ColumnSpinor::Scalar(a[i]),
            [a, b] => ColumnSpinor::Pair(a[i], b[i]),
            _ => unreachable!(),
        }
    }

    pub fn rho(&self) -> GridField<f64> {
        GridField::from_index(*self.grid(), |i| self.column(i).norm_sq())
    }

    /// `sum rho dV` over the grid.
    pub fn norm(&self) -> f64 {
        self.rho().values().iter().sum::<f64>() * self.grid().cell_volume()
    }

    pub fn spinors(&self) -> GridField<IdealSpinor> {
        GridField::from_index(*self.grid(), |i| IdealSpinor::from_column(&self.column(i)))
    }

    /// Embeds a Schrodinger field as the upper component of a Pauli field.
    pub fn to_pauli(&self) -> Self {
        if self.is_pauli() {
            return self.clone();
        }
        let zero = self.components[0].map(|_| Complex64::new(0.0, 0.0));
        Self {
            components: vec![self.components[0].clone(), zero],
        }
    }

    /// Multiplies every component by `e^{i lambda}`.
    pub fn phase_rotate(&self, lambda: f64) -> Self {
        let ph = Complex64::from_polar(1.0, lambda);
        Self {
            components: self.components.iter().map(|c| c.map(|z| z * ph)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.values().iter().all(|z| z.is_finite()))
    }
}
