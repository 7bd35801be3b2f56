use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;

/// Strang-split Fourier propagator on a periodic grid:
/// half-step potential phase, exact kinetic phase in k-space, half-step potential.
pub(crate) struct SplitStep {
    grid: Grid,
    half_phase: Vec<Complex64>,
    kinetic: Vec<Complex64>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    line: Vec<Complex64>,
}

/// Angular wavenumbers in FFT order for `n` samples spaced `h`.
pub(crate) fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let l = n as f64 * h;
    (0..n)
        .map(|j| {
            let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            2.0 * PI * m / l
        })
        .collect()
}

impl SplitStep {
    pub(crate) fn new(grid: Grid, mass: f64, dt: f64, potential: Option<&[f64]>) -> Self {
        let half_phase = match potential {
            Some(v) => v.iter().map(|v| Complex64::from_polar(1.0, -v * dt / 2.0)).collect(),
            None => vec![Complex64::new(1.0, 0.0); grid.len()],
        };
        let ks: Vec<Vec<f64>> = (0..grid.dim()).map(|a| wavenumbers(grid.count(a), grid.spacing(a))).collect();
        let kinetic = (0..grid.len())
            .map(|i| {
                let idx = grid.multi(i);
                let k2: f64 = (0..grid.dim()).map(|a| ks[a][idx[a]].powi(2)).sum();
                Complex64::from_polar(1.0, -k2 * dt / (2.0 * mass))
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = (0..grid.dim()).map(|a| planner.plan_fft_forward(grid.count(a))).collect();
        let inverse = (0..grid.dim()).map(|a| planner.plan_fft_inverse(grid.count(a))).collect();
        let n = (0..grid.dim()).map(|a| grid.count(a)).max().unwrap_or(1);
        Self {
            grid,
            half_phase,
            kinetic,
            forward,
            inverse,
            line: vec![Complex64::default(); n],
        }
    }

    fn transform(&mut self, psi: &mut [Complex64], inverse: bool) {
        let g = self.grid;
        for a in 0..g.dim() {
            let n = g.count(a);
            let stride = g.stride(a);
            let plan = if inverse { &self.inverse[a] } else { &self.forward[a] };
            let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
            for l in 0..g.len() / n {
                let base = (l % stride) + (l / stride) * stride * n;
                for j in 0..n {
                    self.line[j] = psi[base + j * stride];
                }
                plan.process(&mut self.line[..n]);
                for j in 0..n {
                    psi[base + j * stride] = self.line[j] * scale;
                }
            }
        }
    }

    pub(crate) fn step(&mut self, psi: &mut [Complex64]) {
        for (p, ph) in psi.iter_mut().zip(&self.half_phase) {
            *p *= ph;
        }
        self.transform(psi, false);
        for (p, k) in psi.iter_mut().zip(&self.kinetic) {
            *p *= k;
        }
        self.transform(psi, true);
        for (p, ph) in psi.iter_mut().zip(&self.half_phase) {
            *p *= ph;
        }
    }
}
