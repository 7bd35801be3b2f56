use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{fmt_float, GridField, SnapshotSeries};
use crate::vec3::Vec3;

/// Paths integrated from a set of seeds. `paths[s][n]` is the position of
/// seed `s` at `times[n]`; truncated paths stop early.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySet {
    pub seeds: Vec<Vec3>,
    pub times: Vec<f64>,
    pub paths: Vec<Vec<Vec3>>,
    pub truncated: Vec<bool>,
}

/// Velocity at time `t`, linear between frames and multilinear in space.
fn velocity_at(v: &SnapshotSeries<GridField<Vec3>>, p: Vec3, t: f64) -> Option<Vec3> {
    let last = v.len() - 1;
    let s = ((t - v.time(0)) / v.dt()).clamp(0.0, last as f64);
    let k = (s.floor() as usize).min(last.saturating_sub(1));
    let w = s - k as f64;
    let a = v.frame(k).interpolate(p)?;
    let out = if last == 0 {
        a
    } else {
        let b = v.frame(k + 1).interpolate(p)?;
        a * (1.0 - w) + b * w
    };
    out.is_finite().then_some(out)
}

/// Classic RK4 in the velocity frames from the first to the last frame time.
///
/// A path ends with `truncated = true` when a stage leaves a clamped grid or
/// reads a masked (non-finite) velocity.
pub fn integrate_trajectories(
    velocity: &SnapshotSeries<GridField<Vec3>>,
    seeds: &[Vec3],
    dt: f64,
) -> Result<TrajectorySet> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("trajectory step {dt} must be positive")));
    }
    if velocity.is_empty() {
        return Err(Error::InvalidParameter("no velocity frames".into()));
    }
    let grid = velocity.frame(0).grid();
    for (i, s) in seeds.iter().enumerate() {
        if !grid.contains(*s) {
            return Err(Error::SeedOutsideGrid { index: i });
        }
    }
    let t0 = velocity.time(0);
    let t_end = velocity.time(velocity.len() - 1);
    let steps = ((t_end - t0) / dt + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=steps).map(|n| t0 + n as f64 * dt).collect();

    let mut paths = Vec::with_capacity(seeds.len());
    let mut truncated = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut path = vec![seed];
        let mut cut = false;
        let mut x = seed;
        for &t in &times[..steps] {
            let f = |p: Vec3, t: f64| velocity_at(velocity, p, t);
            let next = (|| {
                let k1 = f(x, t)?;
                let k2 = f(x + k1 * (dt / 2.0), t + dt / 2.0)?;
                let k3 = f(x + k2 * (dt / 2.0), t + dt / 2.0)?;
                let k4 = f(x + k3 * dt, t + dt)?;
                let y = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
                grid.contains(y).then_some(y)
            })();
            match next {
                Some(y) => {
                    x = y;
                    path.push(y);
                }
                None => {
                    cut = true;
                    break;
                }
            }
        }
        paths.push(path);
        truncated.push(cut);
    }
    Ok(TrajectorySet {
        seeds: seeds.to_vec(),
        times,
        paths,
        truncated,
    })
}

impl TrajectorySet {
    /// True when no two 1D paths swap order at any common time step.
    pub fn preserves_order(&self) -> bool {
        let mut order: Vec<usize> = (0..self.seeds.len()).collect();
        order.sort_by(|&a, &b| self.seeds[a].x().total_cmp(&self.seeds[b].x()));
        for n in 0..self.times.len() {
            let alive: Vec<f64> = order
                .iter()
                .filter_map(|&s| self.paths[s].get(n).map(|p| p.x()))
                .collect();
            if alive.windows(2).any(|w| w[0] > w[1]) {
                return false;
            }
        }
        true
    }

    /// `seed_id,t,x[,y,z],truncated_flag`, one row per stored position.
    pub fn to_csv(&self, dim: usize) -> String {
        let mut out = String::from("seed_id,t");
        for name in &["x", "y", "z"][..dim] {
            write!(out, ",{name}").unwrap();
        }
        out.push_str(",truncated_flag\n");
        for (s, path) in self.paths.iter().enumerate() {
            let flag = u8::from(self.truncated[s]);
            for (n, p) in path.iter().enumerate() {
                write!(out, "{s},{}", fmt_float(self.times[n])).unwrap();
                for a in 0..dim {
                    write!(out, ",{}", fmt_float(p[a])).unwrap();
                }
                writeln!(out, ",{flag}").unwrap();
            }
        }
        out
    }
}
