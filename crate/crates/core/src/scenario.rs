//! Closed-form initial states and their analytic free evolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid, GridField};
use crate::spinor::{ColumnField, ColumnSpinor, EulerAngles};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Particle {
    Schrodinger,
    Pauli,
}

/// Uniform spin direction `(theta, phi)` attached to a scalar profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SpinDirection {
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

impl SpinDirection {
    fn column(&self) -> (Complex64, Complex64) {
        EulerAngles::new(self.theta, self.phi, 0.0, 1.0).to_components()
    }
}

/// Gaussian packet `exp(-(x - x0)^2 / 4 sigma^2 + i k (x - x0))` per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Packet {
    pub center: Vec<f64>,
    pub sigma: f64,
    #[serde(default)]
    pub k: Vec<f64>,
    /// Relative amplitude inside a superposition.
    #[serde(default = "one")]
    pub weight: f64,
    /// Constant phase inside a superposition.
    #[serde(default)]
    pub phase: f64,
}

fn one() -> f64 {
    1.0
}

/// `value + gradient . r + sum_a ripple[a] sin(2 pi (r_a - min_a) / L_a) + rate t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    #[serde(default)]
    pub value: f64,
    #[serde(default)]
    pub gradient: Vec<f64>,
    #[serde(default)]
    pub ripple: Vec<f64>,
    #[serde(default)]
    pub rate: f64,
}

impl Profile {
    fn at(&self, grid: &Grid, p: Vec3, t: f64) -> f64 {
        let mut v = self.value + self.rate * t;
        for (a, g) in self.gradient.iter().enumerate().take(grid.dim()) {
            v += g * p[a];
        }
        for (a, r) in self.ripple.iter().enumerate().take(grid.dim()) {
            let ax = grid.axis(a);
            let len = ax.max - ax.min;
            v += r * (2.0 * PI * (p[a] - ax.min) / len).sin();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateDescriptor {
    /// `e^{i(k.r - k^2 t / 2m)}`, normalised over the grid volume.
    PlaneWave {
        k: Vec<f64>,
        #[serde(default)]
        spin: SpinDirection,
    },
    /// Free Gaussian packet, evolved in closed form.
    Gaussian {
        #[serde(flatten)]
        packet: Packet,
        #[serde(default)]
        spin: SpinDirection,
    },
    /// Independent free packets in the upper and lower components.
    PauliSuperposition { upper: Packet, lower: Packet },
    /// Euler-angle texture with an optional Gaussian envelope. Not a solution
    /// of any equation of motion; used for static identities.
    EulerTexture {
        theta: Profile,
        phi: Profile,
        chi: Profile,
        #[serde(default)]
        envelope: Option<Packet>,
    },
    /// Ground state of `V = m omega^2 r^2 / 2`.
    HarmonicGround {
        omega: f64,
        #[serde(default)]
        spin: SpinDirection,
    },
}

/// Free 1D Gaussian at time `t`.
pub fn free_gaussian_1d(x: f64, t: f64, x0: f64, sigma: f64, k: f64, mass: f64) -> Complex64 {
    let i = Complex64::i();
    let st = Complex64::new(sigma, t / (2.0 * mass * sigma));
    let pre = (2.0 * PI * sigma * sigma).powf(-0.25) * (Complex64::new(sigma, 0.0) / st).sqrt();
    let xi = x - x0 - k * t / mass;
    pre * (-(xi * xi) / (4.0 * sigma * st) + i * (k * (x - x0) - k * k * t / (2.0 * mass))).exp()
}

/// Width `sigma(t) = sigma0 sqrt(1 + (t / 2 m sigma0^2)^2)` of a free packet.
pub fn free_width(sigma: f64, t: f64, mass: f64) -> f64 {
    sigma * (1.0 + (t / (2.0 * mass * sigma * sigma)).powi(2)).sqrt()
}

fn packet_value(p: &Packet, dim: usize, r: Vec3, t: f64, mass: f64) -> Complex64 {
    let mut v = Complex64::from_polar(p.weight, p.phase);
    for a in 0..dim {
        let k = p.k.get(a).copied().unwrap_or(0.0);
        v *= free_gaussian_1d(r[a], t, p.center[a], p.sigma, k, mass);
    }
    v
}

fn check_packet(p: &Packet, grid: &Grid) -> Result<()> {
    if !(p.sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma {} must be positive", p.sigma)));
    }
    if p.center.len() != grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "packet centre has {} coordinates, grid has {} axes",
            p.center.len(),
            grid.dim()
        )));
    }
    if p.k.len() > grid.dim() {
        return Err(Error::InvalidParameter("packet momentum has more components than the grid".into()));
    }
    for a in 0..grid.dim() {
        let ax = grid.axis(a);
        let c = p.center[a];
        if c - 6.0 * p.sigma < ax.min || c + 6.0 * p.sigma > ax.max {
            return Err(Error::InvalidParameter(format!(
                "packet at {c} with sigma {} does not fit in [{}, {}] with a 6 sigma margin",
                p.sigma, ax.min, ax.max
            )));
        }
    }
    Ok(())
}

impl StateDescriptor {
    /// Parameter checks against the grid.
    pub fn validate(&self, grid: &Grid, particle: Particle) -> Result<()> {
        match self {
            Self::PlaneWave { k, .. } => {
                if k.len() > grid.dim() {
                    return Err(Error::InvalidParameter("plane-wave k has more components than the grid".into()));
                }
            }
            Self::Gaussian { packet, .. } => check_packet(packet, grid)?,
            Self::PauliSuperposition { upper, lower } => {
                if particle != Particle::Pauli {
                    return Err(Error::InvalidParameter("pauli-superposition needs particle = pauli".into()));
                }
                check_packet(upper, grid)?;
                check_packet(lower, grid)?;
            }
            Self::EulerTexture { envelope, .. } => {
                if particle != Particle::Pauli {
                    return Err(Error::InvalidParameter("euler-texture needs particle = pauli".into()));
                }
                if let Some(p) = envelope {
                    check_packet(p, grid)?;
                }
            }
            Self::HarmonicGround { omega, .. } => {
                if !(*omega > 0.0) {
                    return Err(Error::InvalidParameter(format!("omega {omega} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// Samples the state at time `t`. Time dependence is exact for the free
    /// packets, the plane wave and the harmonic ground state.
    pub fn sample(&self, grid: Grid, particle: Particle, mass: f64, t: f64) -> Result<ColumnField> {
        self.validate(&grid, particle)?;
        let dim = grid.dim();
        let lift = |spin: &SpinDirection, f: &dyn Fn(Vec3) -> Complex64| {
            let (a, b) = spin.column();
            ColumnField::from_fn(grid, |r| {
                let z = f(r);
                match particle {
                    Particle::Schrodinger => ColumnSpinor::Scalar(z),
                    Particle::Pauli => ColumnSpinor::Pair(z * a, z * b),
                }
            })
        };
        match self {
            Self::PlaneWave { k, spin } => {
                let vol: f64 = (0..dim).map(|a| grid.spacing(a) * grid.axis(a).count as f64).product();
                let amp = if grid.boundary() == Boundary::Periodic {
                    vol.powf(-0.5)
                } else {
                    let span: f64 = (0..dim).map(|a| grid.axis(a).max - grid.axis(a).min).product();
                    span.powf(-0.5)
                };
                let k2: f64 = k.iter().map(|x| x * x).sum();
                lift(spin, &|r| {
                    let kx: f64 = k.iter().enumerate().map(|(a, ka)| ka * r[a]).sum();
                    Complex64::from_polar(amp, kx - k2 * t / (2.0 * mass))
                })
            }
            Self::Gaussian { packet, spin } => lift(spin, &|r| packet_value(packet, dim, r, t, mass)),
            Self::HarmonicGround { omega, spin } => {
                let w = mass * omega;
                let e = dim as f64 * omega / 2.0;
                lift(spin, &|r| {
                    let r2: f64 = (0..dim).map(|a| r[a] * r[a]).sum();
                    let amp = (w / PI).powf(dim as f64 / 4.0) * (-w * r2 / 2.0).exp();
                    Complex64::from_polar(amp, -e * t)
                })
            }
            Self::PauliSuperposition { upper, lower } => {
                let n = (upper.weight.powi(2) + lower.weight.powi(2)).sqrt();
                ColumnField::from_fn(grid, |r| {
                    ColumnSpinor::Pair(
                        packet_value(upper, dim, r, t, mass) / n,
                        packet_value(lower, dim, r, t, mass) / n,
                    )
                })
            }
            Self::EulerTexture {
                theta,
                phi,
                chi,
                envelope,
            } => ColumnField::from_fn(grid, |r| {
                let amp = envelope.as_ref().map_or(1.0, |p| packet_value(p, dim, r, 0.0, mass).norm());
                let angles = EulerAngles::new(theta.at(&grid, r, t), phi.at(&grid, r, t), chi.at(&grid, r, t), amp);
                let (a, b) = angles.to_components();
                ColumnSpinor::Pair(a, b)
            }),
        }
    }

    /// [`StateDescriptor::sample`] rescaled to unit discrete norm.
    pub fn sample_normalized(&self, grid: Grid, particle: Particle, mass: f64, t: f64) -> Result<ColumnField> {
        let f = self.sample(grid, particle, mass, t)?;
        let n = f.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter(format!("state has norm {n} on this grid")));
        }
        let s = n.sqrt().recip();
        let comps = f.into_components().into_iter().map(|c| c.map(|z| z * s)).collect();
        ColumnField::from_components(comps)
    }

    /// Potential matching the descriptor (`m omega^2 r^2 / 2` for the
    /// harmonic ground state), if it has one.
    pub fn natural_potential(&self, grid: Grid, mass: f64) -> Option<GridField<f64>> {
        match self {
            Self::HarmonicGround { omega, .. } => Some(harmonic_potential(grid, mass, *omega)),
            _ => None,
        }
    }
}

pub fn harmonic_potential(grid: Grid, mass: f64, omega: f64) -> GridField<f64> {
    GridField::from_fn(grid, |r| 0.5 * mass * omega * omega * r.norm_sq())
}
