//! Uniform grids in one to three dimensions, sampled fields, and the
//! second-order finite-difference calculus used by the observables.
//!
//! Linear index order is x fastest: `flat = i + nx * (j + ny * k)`.
//! Clamped axes use one-sided second-order stencils at the two edges, so
//! every operator here is O(h^2) everywhere on smooth data.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Pointwise divisions by `rho` are suppressed below this fraction of `max(rho)`.
pub const NODE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Clamped,
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Grid {
    dim: usize,
    axes: [Axis; 3],
    boundary: Boundary,
}

impl Grid {
    /// Central stencils need an interior on every axis.
    pub const MIN_POINTS: usize = 5;

    pub fn new(axes: &[Axis], boundary: Boundary) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1, 2 or 3 (got {})",
                axes.len()
            )));
        }
        let mut all = [Axis::new(0.0, 1.0, 1); 3];
        for (i, a) in axes.iter().enumerate() {
            if a.count < Self::MIN_POINTS {
                return Err(Error::InvalidGrid(format!(
                    "axis {i} has {} points, need at least {}",
                    a.count,
                    Self::MIN_POINTS
                )));
            }
            if !(a.max > a.min) || !a.min.is_finite() || !a.max.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "axis {i} extent [{}, {}] is empty",
                    a.min, a.max
                )));
            }
            all[i] = *a;
        }
        Ok(Self {
            dim: axes.len(),
            axes: all,
            boundary,
        })
    }

    pub fn line(min: f64, max: f64, count: usize, boundary: Boundary) -> Result<Self> {
        Self::new(&[Axis::new(min, max, count)], boundary)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes[..self.dim]
    }

    pub fn axis(&self, i: usize) -> Axis {
        self.axes[i]
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        if axis >= self.dim {
            return 1.0;
        }
        let a = self.axes[axis];
        match self.boundary {
            Boundary::Clamped => (a.max - a.min) / (a.count - 1) as f64,
            Boundary::Periodic => (a.max - a.min) / a.count as f64,
        }
    }

    /// Largest spacing over the used axes.
    pub fn h(&self) -> f64 {
        (0..self.dim).map(|i| self.spacing(i)).fold(0.0, f64::max)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|i| self.spacing(i)).product()
    }

    pub(crate) fn count(&self, axis: usize) -> usize {
        if axis < self.dim {
            self.axes[axis].count
        } else {
            1
        }
    }

    pub(crate) fn stride(&self, axis: usize) -> usize {
        (0..axis).map(|i| self.count(i)).product()
    }

    pub fn flat(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.count(0) * (idx[1] + self.count(1) * idx[2])
    }

    pub fn multi(&self, flat: usize) -> [usize; 3] {
        let nx = self.count(0);
        let ny = self.count(1);
        [flat % nx, (flat / nx) % ny, flat / (nx * ny)]
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.axes[axis].min + i as f64 * self.spacing(axis)
    }

    pub fn point(&self, flat: usize) -> Vec3 {
        let idx = self.multi(flat);
        let mut p = [0.0; 3];
        for (a, c) in p.iter_mut().enumerate().take(self.dim) {
            *c = self.coordinate(a, idx[a]);
        }
        Vec3(p)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Points that are not on a clamped edge. Every point of a periodic grid
    /// is interior.
    pub fn is_interior(&self, flat: usize) -> bool {
        if self.boundary == Boundary::Periodic {
            return true;
        }
        let idx = self.multi(flat);
        (0..self.dim).all(|a| idx[a] > 0 && idx[a] + 1 < self.axes[a].count)
    }

    /// Extent on which the grid values live (clamped) or repeat (periodic).
    pub fn contains(&self, p: Vec3) -> bool {
        (0..self.dim).all(|a| {
            let ax = self.axes[a];
            match self.boundary {
                Boundary::Clamped => p[a] >= ax.min && p[a] <= ax.max,
                Boundary::Periodic => p[a].is_finite(),
            }
        })
    }

    /// Same extent with the spacing divided by `factor` on every used axis.
    pub fn refined(&self, factor: usize) -> Self {
        let mut g = *self;
        for a in 0..self.dim {
            let n = self.axes[a].count;
            g.axes[a].count = match self.boundary {
                Boundary::Clamped => (n - 1) * factor + 1,
                Boundary::Periodic => n * factor,
            };
        }
        g
    }
}

/// Values a stencil can combine.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Linear for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

#[derive(Clone, Debug, PartialEq)]
pub struct GridField<V> {
    grid: Grid,
    values: Vec<V>,
}

impl<V> GridField<V> {
    pub fn new(grid: Grid, values: Vec<V>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(Vec3) -> V) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [V] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> GridField<W> {
        GridField {
            grid: self.grid,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    ///
    /// Panics if the grids differ.
    pub fn zip_map<U, W>(&self, other: &GridField<U>, mut f: impl FnMut(&V, &U) -> W) -> GridField<W> {
        assert_eq!(self.grid, other.grid, "zip_map on fields with different grids");
        GridField {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<V> std::ops::Index<usize> for GridField<V> {
    type Output = V;
    fn index(&self, i: usize) -> &V {
        &self.values[i]
    }
}

impl GridField<f64> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Wraps `x` into `(-period/2, period/2]`.
pub fn wrap_angle(x: f64, period: f64) -> f64 {
    let r = x - period * (x / period).round();
    if r <= -period / 2.0 {
        r + period
    } else if r > period / 2.0 {
        r - period
    } else {
        r
    }
}

fn partial_with<V: Copy>(
    f: &GridField<V>,
    axis: usize,
    diff: impl Fn(V, V) -> V,
    scale: impl Fn(V, f64) -> V,
    sum: impl Fn(V, V) -> V,
) -> GridField<V> {
    let g = f.grid;
    let n = g.count(axis);
    let stride = g.stride(axis);
    let h = g.spacing(axis);
    let periodic = g.boundary == Boundary::Periodic;
    let v = &f.values;
    let values = (0..g.len())
        .map(|flat| {
            let i = g.multi(flat)[axis];
            let base = flat - i * stride;
            let at = |j: usize| v[base + j * stride];
            if periodic {
                let ip = (i + 1) % n;
                let im = (i + n - 1) % n;
                scale(diff(at(ip), at(im)), 0.5 / h)
            } else if i == 0 {
                let d1 = diff(at(1), at(0));
                let d2 = diff(at(2), at(0));
                scale(sum(scale(d1, 4.0), scale(d2, -1.0)), 0.5 / h)
            } else if i == n - 1 {
                let d1 = diff(at(n - 1), at(n - 2));
                let d2 = diff(at(n - 1), at(n - 3));
                scale(sum(scale(d1, 4.0), scale(d2, -1.0)), 0.5 / h)
            } else {
                scale(diff(at(i + 1), at(i - 1)), 0.5 / h)
            }
        })
        .collect();
    GridField { grid: g, values }
}

/// First derivative along `axis`; zero for axes the grid does not have.
pub fn partial<V: Linear>(f: &GridField<V>, axis: usize) -> GridField<V> {
    if axis >= f.grid.dim {
        return f.map(|v| *v * 0.0);
    }
    partial_with(f, axis, |a, b| a - b, |a, s| a * s, |a, b| a + b)
}

/// First derivative of an angle-valued field; differences are wrapped into
/// one period before the stencil combines them.
pub fn partial_angle(f: &GridField<f64>, axis: usize, period: f64) -> GridField<f64> {
    if axis >= f.grid.dim {
        return f.map(|_| 0.0);
    }
    partial_with(f, axis, |a, b| wrap_angle(a - b, period), |a, s| a * s, |a, b| a + b)
}

/// Second derivative along `axis`.
pub fn second_partial<V: Linear>(f: &GridField<V>, axis: usize) -> GridField<V> {
    let g = f.grid;
    if axis >= g.dim {
        return f.map(|v| *v * 0.0);
    }
    let n = g.count(axis);
    let stride = g.stride(axis);
    let h2 = g.spacing(axis).powi(2);
    let periodic = g.boundary == Boundary::Periodic;
    let v = &f.values;
    let values = (0..g.len())
        .map(|flat| {
            let i = g.multi(flat)[axis];
            let base = flat - i * stride;
            let at = |j: usize| v[base + j * stride];
            let s = if periodic {
                at((i + 1) % n) + at((i + n - 1) % n) - at(i) * 2.0
            } else if i == 0 {
                at(0) * 2.0 - at(1) * 5.0 + at(2) * 4.0 - at(3)
            } else if i == n - 1 {
                at(n - 1) * 2.0 - at(n - 2) * 5.0 + at(n - 3) * 4.0 - at(n - 4)
            } else {
                at(i + 1) + at(i - 1) - at(i) * 2.0
            };
            s * (1.0 / h2)
        })
        .collect();
    GridField { grid: g, values }
}

pub fn gradient(f: &GridField<f64>) -> GridField<Vec3> {
    let parts: Vec<_> = (0..3).map(|a| partial(f, a)).collect();
    GridField::from_index(f.grid, |i| Vec3([parts[0][i], parts[1][i], parts[2][i]]))
}

pub fn gradient_angle(f: &GridField<f64>, period: f64) -> GridField<Vec3> {
    let parts: Vec<_> = (0..3).map(|a| partial_angle(f, a, period)).collect();
    GridField::from_index(f.grid, |i| Vec3([parts[0][i], parts[1][i], parts[2][i]]))
}

pub fn laplacian<V: Linear>(f: &GridField<V>) -> GridField<V> {
    let mut out = second_partial(f, 0);
    for a in 1..f.grid.dim {
        let d = second_partial(f, a);
        for (o, x) in out.values.iter_mut().zip(d.values) {
            *o = *o + x;
        }
    }
    out
}

pub fn divergence(v: &GridField<Vec3>) -> GridField<f64> {
    let mut out = v.map(|_| 0.0);
    for a in 0..v.grid.dim {
        let comp = v.map(|x| x[a]);
        let d = partial(&comp, a);
        for (o, x) in out.values.iter_mut().zip(d.values) {
            *o += x;
        }
    }
    out
}

/// Componentwise central-difference curl; derivatives along missing axes
/// are zero.
pub fn curl(v: &GridField<Vec3>) -> GridField<Vec3> {
    let comp: Vec<GridField<f64>> = (0..3).map(|c| v.map(|x| x[c])).collect();
    // d[c][a] = d(v_c)/d(x_a)
    let d: Vec<Vec<GridField<f64>>> = comp
        .iter()
        .map(|f| (0..3).map(|a| partial(f, a)).collect())
        .collect();
    GridField::from_index(v.grid, |i| {
        Vec3([
            d[2][1][i] - d[1][2][i],
            d[0][2][i] - d[2][0][i],
            d[1][0][i] - d[0][1][i],
        ])
    })
}

impl<V> GridField<V> {
    pub fn from_index(grid: Grid, f: impl FnMut(usize) -> V) -> Self {
        Self {
            grid,
            values: (0..grid.len()).map(f).collect(),
        }
    }
}

impl<V: Linear> GridField<V> {
    /// Multilinear interpolation at `p`. `None` outside a clamped grid.
    pub fn interpolate(&self, p: Vec3) -> Option<V> {
        let g = &self.grid;
        if !g.contains(p) {
            return None;
        }
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        let mut w = [0.0f64; 3];
        for a in 0..g.dim {
            let ax = g.axes[a];
            let h = g.spacing(a);
            let s = (p[a] - ax.min) / h;
            match g.boundary {
                Boundary::Clamped => {
                    let i = (s.floor() as isize).clamp(0, ax.count as isize - 2) as usize;
                    lo[a] = i;
                    hi[a] = i + 1;
                    w[a] = s - i as f64;
                }
                Boundary::Periodic => {
                    let n = ax.count as f64;
                    let s = s.rem_euclid(n);
                    let i = (s.floor() as usize).min(ax.count - 1);
                    lo[a] = i;
                    hi[a] = (i + 1) % ax.count;
                    w[a] = s - i as f64;
                }
            }
        }
        let corners = 1usize << g.dim;
        let mut acc: Option<V> = None;
        for c in 0..corners {
            let mut idx = [0usize; 3];
            let mut weight = 1.0;
            for a in 0..g.dim {
                if c & (1 << a) != 0 {
                    idx[a] = hi[a];
                    weight *= w[a];
                } else {
                    idx[a] = lo[a];
                    weight *= 1.0 - w[a];
                }
            }
            let term = self.values[g.flat(idx)] * weight;
            acc = Some(match acc {
                None => term,
                Some(s) => s + term,
            });
        }
        acc
    }
}

/// `valid[i]` is false where `rho[i] < threshold * max(rho)`.
pub fn node_mask(rho: &GridField<f64>, threshold: f64) -> Vec<bool> {
    let max = rho.max_abs();
    rho.values.iter().map(|r| *r >= threshold * max && *r > 0.0).collect()
}

/// Time-ordered frames with a uniform step.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotSeries<F> {
    times: Vec<f64>,
    frames: Vec<F>,
}

impl<F> SnapshotSeries<F> {
    pub fn uniform(t0: f64, dt: f64, frames: Vec<F>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        let times = (0..frames.len()).map(|k| t0 + k as f64 * dt).collect();
        Ok(Self { times, frames })
    }

    pub fn from_times(times: Vec<f64>, frames: Vec<F>) -> Result<Self> {
        if times.len() != frames.len() {
            return Err(Error::InvalidParameter(format!(
                "{} times for {} frames",
                times.len(),
                frames.len()
            )));
        }
        if times.len() >= 2 {
            let dt = times[1] - times[0];
            if !(dt > 0.0) {
                return Err(Error::InvalidParameter("times must increase".into()));
            }
            for w in times.windows(2) {
                let step = w[1] - w[0];
                if (step - dt).abs() > 1e-9 * dt.max(1.0) {
                    return Err(Error::InvalidParameter("time step is not uniform".into()));
                }
            }
        }
        Ok(Self { times, frames })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn dt(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, k: usize) -> f64 {
        self.times[k]
    }

    pub fn frames(&self) -> &[F] {
        &self.frames
    }

    pub fn frame(&self, k: usize) -> &F {
        &self.frames[k]
    }

    pub fn map<G>(&self, f: impl FnMut(&F) -> G) -> SnapshotSeries<G> {
        SnapshotSeries {
            times: self.times.clone(),
            frames: self.frames.iter().map(f).collect(),
        }
    }

    /// Frames `k - 1` and `k + 1`; rejects the first and last frame.
    pub fn neighbours(&self, k: usize) -> Result<(&F, &F)> {
        if k == 0 || k + 1 >= self.frames.len() {
            return Err(Error::BoundaryFrame {
                index: k,
                len: self.frames.len(),
            });
        }
        Ok((&self.frames[k - 1], &self.frames[k + 1]))
    }

    /// Three consecutive frames centred on `k`.
    pub fn window(&self, k: usize) -> Result<SnapshotSeries<F>>
    where
        F: Clone,
    {
        self.neighbours(k)?;
        Ok(SnapshotSeries {
            times: self.times[k - 1..=k + 1].to_vec(),
            frames: self.frames[k - 1..=k + 1].to_vec(),
        })
    }
}

/// Central difference `(f[k+1] - f[k-1]) / 2dt`.
pub fn time_derivative<V: Linear>(series: &SnapshotSeries<GridField<V>>, k: usize) -> Result<GridField<V>> {
    let (prev, next) = series.neighbours(k)?;
    let inv = 0.5 / series.dt();
    Ok(next.zip_map(prev, |a, b| (*a - *b) * inv))
}

/// Central time difference of an angle-valued field.
pub fn time_derivative_angle(series: &SnapshotSeries<GridField<f64>>, k: usize, period: f64) -> Result<GridField<f64>> {
    let (prev, next) = series.neighbours(k)?;
    let inv = 0.5 / series.dt();
    Ok(next.zip_map(prev, |a, b| wrap_angle(a - b, period) * inv))
}

/// Period used for the Euler angles `phi` and `chi`.
pub const ANGLE_PERIOD: f64 = 2.0 * PI;

/// Column-oriented CSV export: coordinates first, then the added columns.
pub struct CsvTable {
    grid: Grid,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(grid: Grid) -> Self {
        Self {
            grid,
            names: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn scalar(mut self, name: &str, f: &GridField<f64>) -> Self {
        assert_eq!(f.grid, self.grid, "CSV column on a different grid");
        self.names.push(name.to_string());
        self.columns.push(f.values.clone());
        self
    }

    /// Adds `name_x`, `name_y`, `name_z` (only the grid's axes).
    pub fn vector(mut self, name: &str, f: &GridField<Vec3>) -> Self {
        assert_eq!(f.grid, self.grid, "CSV column on a different grid");
        for (c, suffix) in ["x", "y", "z"].iter().enumerate().take(self.grid.dim) {
            self.names.push(format!("{name}_{suffix}"));
            self.columns.push(f.values.iter().map(|v| v[c]).collect());
        }
        self
    }

    /// Adds `name_x..z` for all three components regardless of grid dimension.
    pub fn vector3(mut self, name: &str, f: &GridField<Vec3>) -> Self {
        assert_eq!(f.grid, self.grid, "CSV column on a different grid");
        for (c, suffix) in ["x", "y", "z"].iter().enumerate() {
            self.names.push(format!("{name}_{suffix}"));
            self.columns.push(f.values.iter().map(|v| v[c]).collect());
        }
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let coords = ["x", "y", "z"];
        let header: Vec<&str> = coords[..self.grid.dim]
            .iter()
            .copied()
            .chain(self.names.iter().map(String::as_str))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.grid.len() {
            let p = self.grid.point(i);
            let mut first = true;
            for a in 0..self.grid.dim {
                if !first {
                    out.push(',');
                }
                first = false;
                write!(out, "{}", fmt_float(p[a])).unwrap();
            }
            for col in &self.columns {
                out.push(',');
                out.push_str(&fmt_float(col[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}
