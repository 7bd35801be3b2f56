use num_complex::Complex64;

use crate::grid::{Boundary, Grid};

/// Solves a tridiagonal system with constant off-diagonals in place.
/// `rhs` becomes the solution; `scratch` must have the same length.
pub(crate) fn solve_tridiagonal(off: Complex64, diag: &[Complex64], rhs: &mut [Complex64], scratch: &mut [Complex64]) {
    let n = diag.len();
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        scratch[i] = off / beta;
        beta = diag[i] - off * scratch[i];
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= scratch[i + 1] * next;
    }
}

/// Periodic (cyclic) variant via the Sherman-Morrison correction.
pub(crate) fn solve_cyclic(off: Complex64, diag: &[Complex64], rhs: &mut [Complex64], work: &mut CyclicWork) {
    let n = diag.len();
    let gamma = -diag[0];
    work.diag.clear();
    work.diag.extend_from_slice(diag);
    work.diag[0] -= gamma;
    work.diag[n - 1] -= off * off / gamma;
    work.u.clear();
    work.u.resize(n, Complex64::new(0.0, 0.0));
    work.u[0] = gamma;
    work.u[n - 1] = off;
    work.scratch.resize(n, Complex64::new(0.0, 0.0));
    solve_tridiagonal(off, &work.diag, rhs, &mut work.scratch);
    solve_tridiagonal(off, &work.diag, &mut work.u, &mut work.scratch);
    let z = &work.u;
    let fact = (rhs[0] + off * rhs[n - 1] / gamma) / (1.0 + z[0] + off * z[n - 1] / gamma);
    for (x, zi) in rhs.iter_mut().zip(z) {
        *x -= fact * zi;
    }
}

#[derive(Default)]
pub(crate) struct CyclicWork {
    diag: Vec<Complex64>,
    u: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// Crank-Nicolson propagator for `H = -lap/2m + V` with the kinetic term
/// split by axis. In 1D the potential sits inside the tridiagonal system;
/// in higher dimensions it is applied as half-step phases around the axis
/// sweeps.
pub(crate) struct CrankNicolson {
    grid: Grid,
    dt: f64,
    kappa: [f64; 3],
    potential: Vec<f64>,
    half_phase: Vec<Complex64>,
    line: Vec<Complex64>,
    rhs: Vec<Complex64>,
    diag: Vec<Complex64>,
    scratch: Vec<Complex64>,
    cyclic: CyclicWork,
}

impl CrankNicolson {
    pub(crate) fn new(grid: Grid, mass: f64, dt: f64, potential: Option<&[f64]>) -> Self {
        let mut kappa = [0.0; 3];
        for (a, k) in kappa.iter_mut().enumerate().take(grid.dim()) {
            let h = grid.spacing(a);
            *k = 1.0 / (2.0 * mass * h * h);
        }
        let potential = potential.map_or_else(|| vec![0.0; grid.len()], <[f64]>::to_vec);
        let half_phase = potential.iter().map(|v| Complex64::from_polar(1.0, -v * dt / 2.0)).collect();
        let n = (0..grid.dim()).map(|a| grid.count(a)).max().unwrap_or(1);
        Self {
            grid,
            dt,
            kappa,
            potential,
            half_phase,
            line: vec![Complex64::default(); n],
            rhs: vec![Complex64::default(); n],
            diag: vec![Complex64::default(); n],
            scratch: vec![Complex64::default(); n],
            cyclic: CyclicWork::default(),
        }
    }

    pub(crate) fn step(&mut self, psi: &mut [Complex64]) {
        if self.grid.dim() == 1 {
            self.sweep(psi, 0, true);
            return;
        }
        for (p, ph) in psi.iter_mut().zip(&self.half_phase) {
            *p *= ph;
        }
        for a in 0..self.grid.dim() {
            self.sweep(psi, a, false);
        }
        for (p, ph) in psi.iter_mut().zip(&self.half_phase) {
            *p *= ph;
        }
    }

    fn sweep(&mut self, psi: &mut [Complex64], axis: usize, with_potential: bool) {
        let g = self.grid;
        let n = g.count(axis);
        let stride = g.stride(axis);
        let periodic = g.boundary() == Boundary::Periodic;
        let kappa = self.kappa[axis];
        let half = Complex64::new(0.0, self.dt / 2.0);
        let off = -half * kappa;
        let lines = g.len() / n;
        for l in 0..lines {
            let base = (l % stride) + (l / stride) * stride * n;
            for j in 0..n {
                self.line[j] = psi[base + j * stride];
            }
            for j in 0..n {
                let v = if with_potential { self.potential[base + j * stride] } else { 0.0 };
                let left = if j > 0 {
                    self.line[j - 1]
                } else if periodic {
                    self.line[n - 1]
                } else {
                    Complex64::default()
                };
                let right = if j + 1 < n {
                    self.line[j + 1]
                } else if periodic {
                    self.line[0]
                } else {
                    Complex64::default()
                };
                let h_psi = (self.line[j] * 2.0 - left - right) * kappa + self.line[j] * v;
                self.rhs[j] = self.line[j] - half * h_psi;
                self.diag[j] = 1.0 + half * (2.0 * kappa + v);
            }
            if periodic {
                solve_cyclic(off, &self.diag[..n], &mut self.rhs[..n], &mut self.cyclic);
            } else {
                solve_tridiagonal(off, &self.diag[..n], &mut self.rhs[..n], &mut self.scratch[..n]);
            }
            for j in 0..n {
                psi[base + j * stride] = self.rhs[j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    fn apply(off: Complex64, diag: &[Complex64], x: &[Complex64], cyclic: bool) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { x[i - 1] } else if cyclic { x[n - 1] } else { c(0.0, 0.0) };
                let r = if i + 1 < n { x[i + 1] } else if cyclic { x[0] } else { c(0.0, 0.0) };
                diag[i] * x[i] + off * (l + r)
            })
            .collect()
    }

    #[test]
    fn tridiagonal_solves() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &cyclic in &[false, true] {
            let n = 17;
            let off = c(0.0, -0.3);
            let diag: Vec<_> = (0..n).map(|_| c(1.0, rng.gen_range(0.5..1.5))).collect();
            let x = random(n, &mut rng);
            let mut b = apply(off, &diag, &x, cyclic);
            if cyclic {
                solve_cyclic(off, &diag, &mut b, &mut CyclicWork::default());
            } else {
                solve_tridiagonal(off, &diag, &mut b, &mut vec![c(0.0, 0.0); n]);
            }
            for (a, e) in b.iter().zip(&x) {
                assert!((a - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn step_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for boundary in [Boundary::Clamped, Boundary::Periodic] {
            let g = Grid::new(
                &[crate::grid::Axis::new(0.0, 1.0, 12), crate::grid::Axis::new(0.0, 2.0, 9)],
                boundary,
            )
            .unwrap();
            let v: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(0.0..5.0)).collect();
            let mut psi = random(g.len(), &mut rng);
            let before: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            let mut cn = CrankNicolson::new(g, 1.0, 0.01, Some(&v));
            for _ in 0..50 {
                cn.step(&mut psi);
            }
            let after: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            assert!((after - before).abs() < 1e-11 * before);
        }
    }
}
