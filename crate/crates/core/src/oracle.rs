//! Standard-formalism oracle: Pauli matrices, density matrices, the
//! energy-momentum densities and the textbook Pauli current.
//!
//! Nothing in here uses the multivector product. [`matrix_rep`] only reads
//! coefficients.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::algebra::Multivector;
use crate::error::{Error, Result};
use crate::grid::{curl, partial, GridField, SnapshotSeries};
use crate::spinor::{ColumnField, ColumnSpinor};
use crate::vec3::Vec3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex 2x2 matrix, row-major.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * c)))
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - o.0[r][c]).norm());
            }
        }
        d
    }
}

impl Add for Mat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] += o.0[r][c];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-ONE)
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut out = Mat2::ZERO;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }
}

pub const SIGMA: [Mat2; 3] = [
    Mat2([[ZERO, ONE], [ONE, ZERO]]),
    Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]),
    Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]),
];

/// Image of a multivector: a complex number for Cl(0,1), a 2x2 matrix for Cl(3,0).
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum MatrixRep {
    Scalar(Complex64),
    Matrix(Mat2),
}

impl MatrixRep {
    pub fn dagger(&self) -> Self {
        match self {
            Self::Scalar(z) => Self::Scalar(z.conj()),
            Self::Matrix(m) => Self::Matrix(m.dagger()),
        }
    }

    pub fn trace(&self) -> Complex64 {
        match self {
            Self::Scalar(z) => *z,
            Self::Matrix(m) => m.trace(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (Self::Scalar(a), Self::Scalar(b)) => Ok(Self::Scalar(a * b)),
            (Self::Matrix(a), Self::Matrix(b)) => Ok(Self::Matrix(*a * *b)),
            _ => Err(Error::InvalidParameter("mixing scalar and matrix representations".into())),
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        match (self, o) {
            (Self::Scalar(a), Self::Scalar(b)) => (a - b).norm(),
            (Self::Matrix(a), Self::Matrix(b)) => a.max_abs_diff(b),
            _ => f64::INFINITY,
        }
    }
}

/// Blade images in canonical order `1, e1, e2, e3, e23, e13, e12, e123`.
fn pauli_blades() -> [Mat2; 8] {
    let [s1, s2, s3] = SIGMA;
    [Mat2::IDENTITY, s1, s2, s3, s2 * s3, s1 * s3, s1 * s2, s1 * s2 * s3]
}

pub fn matrix_rep(a: &Multivector) -> MatrixRep {
    let c = a.coeffs();
    if a.signature().is_pauli() {
        let m = pauli_blades()
            .iter()
            .zip(c)
            .fold(Mat2::ZERO, |acc, (b, &x)| acc + b.scale(Complex64::new(x, 0.0)));
        MatrixRep::Matrix(m)
    } else {
        MatrixRep::Scalar(Complex64::new(c[0], c[1]))
    }
}

/// `Psi Psi^dagger`; `|psi|^2` for a single component.
pub fn density_matrix(psi: &ColumnSpinor) -> MatrixRep {
    match *psi {
        ColumnSpinor::Scalar(p) => MatrixRep::Scalar(Complex64::new(p.norm_sqr(), 0.0)),
        ColumnSpinor::Pair(a, b) => {
            let v = [a, b];
            let mut m = Mat2::ZERO;
            for r in 0..2 {
                for c in 0..2 {
                    m.0[r][c] = v[r] * v[c].conj();
                }
            }
            MatrixRep::Matrix(m)
        }
    }
}

/// `Psi^dagger sigma Psi`; zero for a single component.
pub fn spin_density(psi: &ColumnSpinor) -> Vec3 {
    match *psi {
        ColumnSpinor::Scalar(_) => Vec3::ZERO,
        ColumnSpinor::Pair(a, b) => {
            let v = [a, b];
            let comp = |s: &Mat2| {
                let w = s.apply(v);
                (v[0].conj() * w[0] + v[1].conj() * w[1]).re
            };
            Vec3([comp(&SIGMA[0]), comp(&SIGMA[1]), comp(&SIGMA[2])])
        }
    }
}

/// `Re tr(rep(B) rho)`.
pub fn expectation(b: &Multivector, rho: &MatrixRep) -> Result<f64> {
    Ok(matrix_rep(b).mul(rho)?.trace().re)
}

/// Momentum density `T^{0j} = Im(psi* d_j psi)`, summed over components.
pub fn momentum_density(field: &ColumnField) -> GridField<Vec3> {
    let grid = *field.grid();
    let mut out = GridField::from_index(grid, |_| Vec3::ZERO);
    for c in field.components() {
        for a in 0..grid.dim() {
            let d = partial(c, a);
            for (i, v) in out.values_mut().iter_mut().enumerate() {
                v.0[a] += (c[i].conj() * d[i]).im;
            }
        }
    }
    out
}

/// Energy density `T^{00} = -Im(psi* d_t psi)` at frame `k`, central in time.
pub fn energy_density(series: &SnapshotSeries<ColumnField>, k: usize) -> Result<GridField<f64>> {
    let (prev, next) = series.neighbours(k)?;
    let now = series.frame(k);
    let inv = 1.0 / (2.0 * series.dt());
    let mut out = GridField::from_index(*now.grid(), |_| 0.0);
    for ((c, p), n) in now.components().iter().zip(prev.components()).zip(next.components()) {
        for (i, v) in out.values_mut().iter_mut().enumerate() {
            let dt = (n[i] - p[i]) * inv;
            *v -= (c[i].conj() * dt).im;
        }
    }
    Ok(out)
}

/// Textbook probability current `[Im(Psi^dag grad Psi) + curl(Psi^dag sigma Psi)/2] / m`.
pub fn messiah_current(field: &ColumnField, mass: f64) -> GridField<Vec3> {
    let conv = momentum_density(field);
    let spin = GridField::from_index(*field.grid(), |i| spin_density(&field.column(i)));
    let rot = curl(&spin);
    conv.zip_map(&rot, |c, r| (*c + *r * 0.5) / mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{pauli, schrodinger, Signature};
    use crate::grid::{Boundary, Grid};
    use crate::spinor::IdealSpinor;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_images() {
        assert_eq!(matrix_rep(&pauli::E3), MatrixRep::Matrix(SIGMA[2]));
        assert_eq!(matrix_rep(&pauli::ONE), MatrixRep::Matrix(Mat2::IDENTITY));
        assert_eq!(matrix_rep(&pauli::E123), MatrixRep::Matrix(Mat2::IDENTITY.scale(I)));
        assert_eq!(matrix_rep(&schrodinger::E), MatrixRep::Scalar(I));
    }

    #[test]
    fn density_matrix_examples() {
        let up = density_matrix(&ColumnSpinor::Pair(ONE, ZERO));
        assert_eq!(up, MatrixRep::Matrix(Mat2([[ONE, ZERO], [ZERO, ZERO]])));
        let x = density_matrix(&ColumnSpinor::Pair(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)));
        let half = Mat2([[c(0.5, 0.0); 2]; 2]);
        assert!(x.max_abs_diff(&MatrixRep::Matrix(half)) < 1e-15);
        let m = density_matrix(&ColumnSpinor::Pair(c(0.3, -1.0), c(0.2, 0.4)));
        assert!((m.trace() - c(0.09 + 1.0 + 0.04 + 0.16, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let up = density_matrix(&ColumnSpinor::Pair(ONE, ZERO));
        assert_eq!(expectation(&pauli::ONE, &up).unwrap(), 1.0);
        assert_eq!(expectation(&pauli::E3, &up).unwrap(), 1.0);
        assert_eq!(expectation(&pauli::E1, &up).unwrap(), 0.0);
    }

    #[test]
    fn momentum_of_plane_wave() {
        let g = Grid::line(0.0, 2.0 * std::f64::consts::PI, 256, Boundary::Periodic).unwrap();
        let k = 3.0;
        let f = ColumnField::scalar(GridField::from_fn(g, |p| Complex64::from_polar(1.0, k * p.x())));
        let h = g.h();
        let want = (k * h).sin() / h;
        for v in momentum_density(&f).values() {
            assert!((v.x() - want).abs() < 1e-12);
        }
        let real = ColumnField::scalar(GridField::from_fn(g, |p| c(p.x().cos() + 2.0, 0.0)));
        assert!(momentum_density(&real).values().iter().all(|v| v.x() == 0.0));
    }

    #[test]
    fn stationary_energy_density() {
        let g = Grid::line(-1.0, 1.0, 11, Boundary::Clamped).unwrap();
        let e = 0.75;
        let dt = 1e-3;
        let frames = (0..3)
            .map(|n| {
                let t = n as f64 * dt;
                ColumnField::scalar(GridField::from_fn(g, |p| Complex64::from_polar(1.0 + p.x() * p.x(), -e * t)))
            })
            .collect();
        let s = SnapshotSeries::uniform(0.0, dt, frames).unwrap();
        let ed = energy_density(&s, 1).unwrap();
        let rho = s.frame(1).rho();
        for i in 0..g.len() {
            let want = rho[i] * (e * dt).sin() / dt;
            assert!((ed[i] - want).abs() < 1e-12);
        }
        assert!(energy_density(&s, 0).is_err());
    }

    #[test]
    fn real_spinor_current_is_rotational() {
        let g = Grid::line(-3.0, 3.0, 61, Boundary::Clamped).unwrap();
        let f = ColumnField::pair(
            GridField::from_fn(g, |p| c((-p.x() * p.x()).exp(), 0.0)),
            GridField::from_fn(g, |p| c(0.5 * (-p.x() * p.x()).exp() * p.x().cos(), 0.0)),
        )
        .unwrap();
        assert!(momentum_density(&f).values().iter().all(|v| v.norm() == 0.0));
        let j = messiah_current(&f, 2.0);
        assert!(j.values().iter().any(|v| v.norm() > 1e-3));
    }

    fn arb_mv(sig: Signature) -> impl Strategy<Value = Multivector> {
        prop::collection::vec(-3.0f64..3.0, sig.dim()).prop_map(move |c| Multivector::from_coeffs(sig, &c).unwrap())
    }

    proptest! {
        #[test]
        fn homomorphism_pauli(a in arb_mv(Signature::PAULI), b in arb_mv(Signature::PAULI)) {
            let lhs = matrix_rep(&(a * b));
            let rhs = matrix_rep(&a).mul(&matrix_rep(&b)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }

        #[test]
        fn homomorphism_schrodinger(a in arb_mv(Signature::SCHRODINGER), b in arb_mv(Signature::SCHRODINGER)) {
            let lhs = matrix_rep(&(a * b));
            let rhs = matrix_rep(&a).mul(&matrix_rep(&b)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }

        #[test]
        fn conjugation_bridge_on_unit_even(g in prop::array::uniform4(-1.0f64..1.0)) {
            let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assume!(n > 1e-3);
            let u = Multivector::pauli_even(g.map(|x| x / n));
            prop_assert!(matrix_rep(&u.conjugate()).max_abs_diff(&matrix_rep(&u).dagger()) <= 1e-12);
        }

        #[test]
        fn cde_matches_outer_product(a in -2.0f64..2.0, b in -2.0f64..2.0, cc in -2.0f64..2.0, d in -2.0f64..2.0) {
            prop_assume!(a * a + b * b + cc * cc + d * d > 1e-6);
            let col = ColumnSpinor::Pair(c(a, b), c(cc, d));
            let body = IdealSpinor::from_column(&col).cde().body();
            prop_assert!(matrix_rep(&body).max_abs_diff(&density_matrix(&col)) <= 1e-12);
        }

        #[test]
        fn trace_bridge(b in arb_mv(Signature::PAULI), x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
            let col = ColumnSpinor::Pair(c(x, 0.3), c(y, z));
            let cde = IdealSpinor::from_column(&col).cde();
            let alg = cde.expectation(&b).unwrap();
            let mat = expectation(&b, &density_matrix(&col)).unwrap();
            prop_assert!((alg - mat).abs() <= 1e-12 * (1.0 + mat.abs()));
        }
    }
}
