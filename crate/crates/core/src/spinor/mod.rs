//! Minimal-left-ideal spinors `Phi_L = R U eps`, their Clifford density
//! elements, and the maps to column spinors and Euler angles.
//!
//! The Pauli column map is fixed by the matrix image of `U eps`: with
//! `U = g0 + g1 e23 + g2 e13 + g3 e12` the first column is
//! `psi1 = R (g0 + i g3)`, `psi2 = R (g2 + i g1)`.

mod column;
mod io;

pub use column::ColumnField;
pub use io::{read_spinor_file, write_spinor_file};

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::algebra::{pauli, schrodinger, Multivector, Signature};
use crate::error::{Error, Result};
use crate::grid::wrap_angle;
use crate::vec3::Vec3;

/// Below this fraction of the amplitude a Pauli component counts as zero
/// when locating the Euler poles.
const POLE_TOL: f64 = 1e-14;

/// Standard column representation of a state at one point.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum ColumnSpinor {
    Scalar(Complex64),
    Pair(Complex64, Complex64),
}

impl ColumnSpinor {
    pub fn norm_sq(&self) -> f64 {
        match self {
            Self::Scalar(p) => p.norm_sqr(),
            Self::Pair(a, b) => a.norm_sqr() + b.norm_sqr(),
        }
    }

    pub fn components(&self) -> Vec<Complex64> {
        match *self {
            Self::Scalar(p) => vec![p],
            Self::Pair(a, b) => vec![a, b],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

/// Euler-angle form of a Pauli spinor,
/// `(cos(theta/2) e^{i phi/2}, i sin(theta/2) e^{-i phi/2}) e^{i chi/2} R`.
///
/// `chi` plays the role of the overall phase. Half-angle phases mean `chi`
/// needs a 4 pi range to reach every spinor; [`IdealSpinor::to_euler`]
/// returns it in `(-2 pi, 2 pi]`.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct EulerAngles {
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
    pub amplitude: f64,
}

impl EulerAngles {
    pub fn new(theta: f64, phi: f64, chi: f64, amplitude: f64) -> Self {
        Self {
            theta,
            phi,
            chi,
            amplitude,
        }
    }

    pub fn to_components(&self) -> (Complex64, Complex64) {
        let r = self.amplitude;
        let (s, c) = (self.theta / 2.0).sin_cos();
        let overall = Complex64::from_polar(1.0, self.chi / 2.0);
        let psi1 = Complex64::from_polar(r * c, self.phi / 2.0) * overall;
        let psi2 = Complex64::i() * Complex64::from_polar(r * s, -self.phi / 2.0) * overall;
        (psi1, psi2)
    }
}

/// Spin of a Pauli state: the unit axis `a` and `s = U e3 U~ / 2`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SpinVector {
    pub axis: Vec3,
    pub s: Multivector,
}

/// `Phi_L = R U eps` with `R >= 0`, `U U~ = 1`, and `eps` the algebra's
/// primitive idempotent.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct IdealSpinor {
    amplitude: f64,
    rotor: Multivector,
    degenerate: bool,
}

impl IdealSpinor {
    /// Builds a spinor from an amplitude and an even element, normalising
    /// the even element. A zero even element gives the degenerate spinor.
    pub fn new(amplitude: f64, rotor: Multivector) -> Result<Self> {
        if amplitude < 0.0 || !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!("amplitude {amplitude} must be finite and >= 0")));
        }
        if rotor.even() != rotor {
            return Err(Error::InvalidParameter("U must be an even element".into()));
        }
        let n = rotor.norm_sq().sqrt();
        if n == 0.0 || amplitude == 0.0 {
            return Ok(Self::degenerate(rotor.signature()));
        }
        Ok(Self {
            amplitude,
            rotor: rotor / n,
            degenerate: false,
        })
    }

    fn degenerate(sig: Signature) -> Self {
        Self {
            amplitude: 0.0,
            rotor: Multivector::one(sig),
            degenerate: true,
        }
    }

    /// Schrodinger spinor from `psi = R e^{i S}`: `g0 = Re psi / R`, `g1 = Im psi / R`.
    pub fn from_wavefunction(psi: Complex64) -> Self {
        let r = psi.norm();
        if r == 0.0 {
            return Self::degenerate(Signature::SCHRODINGER);
        }
        Self {
            amplitude: r,
            rotor: Multivector::complex(psi.re / r, psi.im / r),
            degenerate: false,
        }
    }

    /// Pauli spinor from a column `(psi1, psi2)`.
    pub fn from_components(psi1: Complex64, psi2: Complex64) -> Self {
        let r = (psi1.norm_sqr() + psi2.norm_sqr()).sqrt();
        if r == 0.0 {
            return Self::degenerate(Signature::PAULI);
        }
        let g = [psi1.re / r, psi2.im / r, psi2.re / r, psi1.im / r];
        Self {
            amplitude: r,
            rotor: Multivector::pauli_even(g),
            degenerate: false,
        }
    }

    pub fn from_column(col: &ColumnSpinor) -> Self {
        match *col {
            ColumnSpinor::Scalar(p) => Self::from_wavefunction(p),
            ColumnSpinor::Pair(a, b) => Self::from_components(a, b),
        }
    }

    pub fn from_euler(angles: &EulerAngles) -> Self {
        let (a, b) = angles.to_components();
        Self::from_components(a, b)
    }

    pub fn signature(&self) -> Signature {
        self.rotor.signature()
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn rho(&self) -> f64 {
        self.amplitude * self.amplitude
    }

    /// The normalised even element `U`.
    pub fn rotor(&self) -> Multivector {
        self.rotor
    }

    pub fn idempotent(&self) -> Multivector {
        if self.signature().is_pauli() {
            pauli::EPSILON
        } else {
            schrodinger::ONE
        }
    }

    /// True at nodes of the state (`R = 0`), where `U` is set to 1.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `[g0, g1, g2, g3]`; Schrodinger spinors fill only `g0, g1`.
    pub fn g(&self) -> [f64; 4] {
        let c = self.rotor.coeffs();
        if self.signature().is_pauli() {
            [c[0], c[4], c[5], c[6]]
        } else {
            [c[0], c[1], 0.0, 0.0]
        }
    }

    pub fn phi_left(&self) -> Multivector {
        self.rotor * self.idempotent() * self.amplitude
    }

    /// Right-ideal partner `R eps U~`. The idempotent is taken as its own
    /// conjugate, so this is the reversion of `Phi_L`; the literal Clifford
    /// conjugate `(1 - e3)/2` of the Pauli idempotent would annihilate `Phi_L`.
    pub fn phi_right(&self) -> Multivector {
        self.idempotent() * self.rotor.conjugate() * self.amplitude
    }

    pub fn to_column(&self) -> ColumnSpinor {
        let r = self.amplitude;
        let g = self.g();
        if self.signature().is_pauli() {
            ColumnSpinor::Pair(Complex64::new(r * g[0], r * g[3]), Complex64::new(r * g[2], r * g[1]))
        } else {
            ColumnSpinor::Scalar(Complex64::new(r * g[0], r * g[1]))
        }
    }

    pub fn to_wavefunction(&self) -> Result<Complex64> {
        match self.to_column() {
            ColumnSpinor::Scalar(p) => Ok(p),
            ColumnSpinor::Pair(..) => Err(Error::Unsupported {
                op: "to_wavefunction",
                signature: self.signature(),
            }),
        }
    }

    pub fn to_components(&self) -> Result<(Complex64, Complex64)> {
        match self.to_column() {
            ColumnSpinor::Pair(a, b) => Ok((a, b)),
            ColumnSpinor::Scalar(_) => Err(Error::Unsupported {
                op: "to_components",
                signature: self.signature(),
            }),
        }
    }

    /// Inverse of [`IdealSpinor::from_euler`]. At the poles (one component
    /// zero) `phi` is not identifiable and the gauge `phi = 0` is returned.
    pub fn to_euler(&self) -> Result<EulerAngles> {
        let (psi1, psi2) = self.to_components()?;
        let r = self.amplitude;
        if r == 0.0 {
            return Ok(EulerAngles::default());
        }
        let (m1, m2) = (psi1.norm(), psi2.norm());
        let theta = 2.0 * m2.atan2(m1);
        let (phi, chi) = if m2 <= POLE_TOL * r {
            (0.0, 2.0 * psi1.arg())
        } else if m1 <= POLE_TOL * r {
            (0.0, 2.0 * psi2.arg() - PI)
        } else {
            let phi = wrap_angle(psi1.arg() - psi2.arg() + FRAC_PI_2, 2.0 * PI);
            (phi, 2.0 * psi1.arg() - phi)
        };
        Ok(EulerAngles {
            theta,
            phi,
            chi: wrap_angle(chi, 4.0 * PI),
            amplitude: r,
        })
    }

    /// Clifford density element `Phi_L Phi_R`.
    pub fn cde(&self) -> CliffordDensityElement {
        CliffordDensityElement {
            rho: self.rho(),
            body: self.phi_left() * self.phi_right(),
        }
    }

    pub fn spin_vector(&self) -> Result<SpinVector> {
        if !self.signature().is_pauli() {
            return Err(Error::Unsupported {
                op: "spin_vector",
                signature: self.signature(),
            });
        }
        Ok(SpinVector {
            axis: spin_axis_from_g(self.g()),
            s: self.rotor * pauli::E3 * self.rotor.conjugate() * 0.5,
        })
    }

    /// Multiplies the state by the global phase `e^{i lambda}`: `U e^{e lambda}`
    /// in Cl(0,1), `Phi_L e^{e12 lambda}` in Cl(3,0) (`e12` commutes with `eps`).
    pub fn phase_rotate(&self, lambda: f64) -> Self {
        let gen = if self.signature().is_pauli() {
            pauli::E12
        } else {
            schrodinger::E
        };
        Self {
            rotor: self.rotor * gen.exp_unit(lambda),
            ..*self
        }
    }
}

/// Closed form of the spin axis `U e3 U~` in terms of the `g` coefficients.
pub fn spin_axis_from_g(g: [f64; 4]) -> Vec3 {
    let [g0, g1, g2, g3] = g;
    Vec3([
        2.0 * (g0 * g2 + g1 * g3),
        2.0 * (g0 * g1 - g2 * g3),
        g0 * g0 - g1 * g1 - g2 * g2 + g3 * g3,
    ])
}

/// Spin axis of a normalised column spinor:
/// `a1 = psi1 psi2* + psi2 psi1*`, `a2 = i(psi1 psi2* - psi2 psi1*)`,
/// `a3 = |psi1|^2 - |psi2|^2`.
pub fn spin_axis_from_components(psi1: Complex64, psi2: Complex64) -> Vec3 {
    let cross = psi1 * psi2.conj();
    let a1 = cross + cross.conj();
    let a2 = Complex64::i() * (cross - cross.conj());
    Vec3([a1.re, a2.re, psi1.norm_sqr() - psi2.norm_sqr()])
}

/// `rho_c = Phi_L Phi_L~` together with `rho = R^2`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CliffordDensityElement {
    rho: f64,
    body: Multivector,
}

impl CliffordDensityElement {
    pub fn signature(&self) -> Signature {
        self.body.signature()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn body(&self) -> Multivector {
        self.body
    }

    /// `<B> = tr(B rho_c)`.
    pub fn expectation(&self, b: &Multivector) -> Result<f64> {
        Ok(b.geometric_product(&self.body)?.trace())
    }

    /// First-kind invariants `tr(B rho_c)` for every basis blade `B`, in
    /// canonical blade order.
    pub fn first_kind_invariants(&self) -> Vec<f64> {
        let sig = self.signature();
        (0..sig.dim())
            .map(|i| (Multivector::blade(sig, i) * self.body).trace())
            .collect()
    }
}
