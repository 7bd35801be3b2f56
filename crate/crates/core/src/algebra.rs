//! Dense real Clifford algebras Cl(0,1) and Cl(3,0).
//!
//! Every element is stored as a fixed-length coefficient array in the
//! canonical blade order
//!
//! | algebra | order |
//! |---------|-------|
//! | Cl(0,1) | `1, e` |
//! | Cl(3,0) | `1, e1, e2, e3, e23, e13, e12, e123` |
//!
//! `e13` is `e1 e3` (ascending indices), so `e31 = -e13`. Products go through
//! a blade multiplication table generated once per signature from the
//! bitmask form of each blade.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Largest basis dimension handled (Cl(3,0) has eight blades).
pub const MAX_DIM: usize = 8;

/// Default tolerance for algebraic identity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Signature {
    p: u8,
    q: u8,
}

impl Signature {
    /// Cl(0,1): one generator `e` with `e^2 = -1`.
    pub const SCHRODINGER: Signature = Signature { p: 0, q: 1 };
    /// Cl(3,0): `e_i e_j + e_j e_i = 2 delta_ij`.
    pub const PAULI: Signature = Signature { p: 3, q: 0 };

    pub fn new(p: u8, q: u8) -> Result<Self> {
        match (p, q) {
            (0, 1) => Ok(Self::SCHRODINGER),
            (3, 0) => Ok(Self::PAULI),
            _ => Err(Error::UnsupportedSignature { p, q }),
        }
    }

    pub const fn p(self) -> u8 {
        self.p
    }

    pub const fn q(self) -> u8 {
        self.q
    }

    pub const fn generators(self) -> usize {
        (self.p + self.q) as usize
    }

    pub const fn dim(self) -> usize {
        1 << self.generators()
    }

    pub const fn max_grade(self) -> usize {
        self.generators()
    }

    pub const fn is_pauli(self) -> bool {
        self.p == 3
    }

    /// Factor relating the algebraic trace to the scalar part.
    ///
    /// `tr(X) = weight * <X>_0`, which matches the real part of the trace of
    /// the standard matrix image (1x1 complex for Cl(0,1), 2x2 for Cl(3,0)).
    pub const fn trace_weight(self) -> f64 {
        if self.is_pauli() {
            2.0
        } else {
            1.0
        }
    }

    pub fn blade_names(self) -> &'static [&'static str] {
        if self.is_pauli() {
            &["1", "e1", "e2", "e3", "e23", "e13", "e12", "e123"]
        } else {
            &["1", "e"]
        }
    }

    fn masks(self) -> &'static [u8] {
        if self.is_pauli() {
            &[0b000, 0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111]
        } else {
            &[0, 1]
        }
    }

    pub fn grade_of(self, blade: usize) -> usize {
        self.masks()[blade].count_ones() as usize
    }

    fn table(self) -> &'static ProductTable {
        if self.is_pauli() {
            &PAULI_TABLE
        } else {
            &SCHRODINGER_TABLE
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({},{})", self.p, self.q)
    }
}

/// Blade product table: `blade[i] * blade[j] = sign * blade[index]`.
struct ProductTable {
    dim: usize,
    index: Vec<usize>,
    sign: Vec<f64>,
}

static SCHRODINGER_TABLE: LazyLock<ProductTable> =
    LazyLock::new(|| ProductTable::build(Signature::SCHRODINGER));
static PAULI_TABLE: LazyLock<ProductTable> = LazyLock::new(|| ProductTable::build(Signature::PAULI));

impl ProductTable {
    fn build(sig: Signature) -> Self {
        let masks = sig.masks();
        let dim = sig.dim();
        let mut by_mask = [0usize; MAX_DIM];
        for (i, &m) in masks.iter().enumerate() {
            by_mask[m as usize] = i;
        }
        let mut index = Vec::with_capacity(dim * dim);
        let mut sign = Vec::with_capacity(dim * dim);
        for &a in masks {
            for &b in masks {
                let mut s = reorder_sign(a, b);
                let common = a & b;
                for g in 0..sig.generators() {
                    if common & (1 << g) != 0 && g >= sig.p as usize {
                        s = -s;
                    }
                }
                index.push(by_mask[(a ^ b) as usize]);
                sign.push(s);
            }
        }
        Self { dim, index, sign }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> (usize, f64) {
        let k = i * self.dim + j;
        (self.index[k], self.sign[k])
    }
}

/// Sign picked up by moving the generators of `b` past those of `a` into
/// ascending order.
fn reorder_sign(a: u8, b: u8) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Which commutator bracket to form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bracket {
    /// `ab - ba`
    Minus,
    /// `ab + ba`
    Plus,
}

/// A real-coefficient element of Cl(0,1) or Cl(3,0).
///
/// Arithmetic operators panic when the operands belong to different
/// algebras; the fallible [`Multivector::geometric_product`] reports the
/// mismatch instead.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Multivector {
    sig: Signature,
    coeffs: [f64; MAX_DIM],
}

impl Multivector {
    pub const fn zero(sig: Signature) -> Self {
        Self {
            sig,
            coeffs: [0.0; MAX_DIM],
        }
    }

    pub const fn scalar(sig: Signature, value: f64) -> Self {
        let mut coeffs = [0.0; MAX_DIM];
        coeffs[0] = value;
        Self { sig, coeffs }
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    /// Unit basis blade at canonical position `index`.
    pub fn blade(sig: Signature, index: usize) -> Self {
        assert!(index < sig.dim(), "blade {index} out of range for {sig}");
        let mut m = Self::zero(sig);
        m.coeffs[index] = 1.0;
        m
    }

    pub fn from_coeffs(sig: Signature, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != sig.dim() {
            return Err(Error::CoefficientCount {
                expected: sig.dim(),
                got: coeffs.len(),
            });
        }
        let mut m = Self::zero(sig);
        m.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(m)
    }

    /// Grade-1 element `v1 e1 + v2 e2 + v3 e3` of Cl(3,0).
    pub fn vector(v: Vec3) -> Self {
        let mut m = Self::zero(Signature::PAULI);
        m.coeffs[1..4].copy_from_slice(&v.0);
        m
    }

    /// Grade-2 element `b[0] e23 + b[1] e13 + b[2] e12` of Cl(3,0).
    pub fn bivector(b: [f64; 3]) -> Self {
        let mut m = Self::zero(Signature::PAULI);
        m.coeffs[4..7].copy_from_slice(&b);
        m
    }

    /// Even element `g0 + g1 e23 + g2 e13 + g3 e12` of Cl(3,0).
    pub fn pauli_even(g: [f64; 4]) -> Self {
        let mut m = Self::zero(Signature::PAULI);
        m.coeffs[0] = g[0];
        m.coeffs[4..7].copy_from_slice(&g[1..]);
        m
    }

    /// `a + b e` in Cl(0,1).
    pub fn complex(re: f64, im: f64) -> Self {
        let mut m = Self::zero(Signature::SCHRODINGER);
        m.coeffs[0] = re;
        m.coeffs[1] = im;
        m
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.sig.dim()]
    }

    pub fn get(&self, blade: usize) -> f64 {
        self.coeffs()[blade]
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Grade-1 coefficients of a Cl(3,0) element.
    pub fn vector_part(&self) -> Vec3 {
        debug_assert!(self.sig.is_pauli());
        Vec3([self.coeffs[1], self.coeffs[2], self.coeffs[3]])
    }

    /// Grade-2 coefficients `[e23, e13, e12]` of a Cl(3,0) element.
    pub fn bivector_part(&self) -> [f64; 3] {
        debug_assert!(self.sig.is_pauli());
        [self.coeffs[4], self.coeffs[5], self.coeffs[6]]
    }

    pub fn pseudoscalar_part(&self) -> f64 {
        self.coeffs[self.sig.dim() - 1]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            Err(Error::SignatureMismatch {
                left: self.sig,
                right: other.sig,
            })
        } else {
            Ok(())
        }
    }

    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let table = self.sig.table();
        let dim = self.sig.dim();
        let mut out = Self::zero(self.sig);
        for i in 0..dim {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..dim {
                let b = other.coeffs[j];
                if b == 0.0 {
                    continue;
                }
                let (k, s) = table.get(i, j);
                out.coeffs[k] += s * a * b;
            }
        }
        out
    }

    /// Clifford conjugation `S - V - B + P`.
    pub fn conjugate(&self) -> Self {
        let mut out = *self;
        for (i, c) in out.coeffs[..self.sig.dim()].iter_mut().enumerate() {
            let g = self.sig.grade_of(i);
            if g == 1 || g == 2 {
                *c = -*c;
            }
        }
        out
    }

    pub fn grade(&self, k: usize) -> Result<Self> {
        if k > self.sig.max_grade() {
            return Err(Error::GradeOutOfRange {
                grade: k,
                max: self.sig.max_grade(),
                signature: self.sig,
            });
        }
        let mut out = Self::zero(self.sig);
        for i in 0..self.sig.dim() {
            if self.sig.grade_of(i) == k {
                out.coeffs[i] = self.coeffs[i];
            }
        }
        Ok(out)
    }

    /// Even-grade part.
    pub fn even(&self) -> Self {
        let mut out = *self;
        for (i, c) in out.coeffs[..self.sig.dim()].iter_mut().enumerate() {
            if self.sig.grade_of(i) % 2 == 1 {
                *c = 0.0;
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self, bracket: Bracket) -> Result<Self> {
        self.check(other)?;
        let ab = self.mul_unchecked(other);
        let ba = other.mul_unchecked(self);
        Ok(match bracket {
            Bracket::Minus => ab - ba,
            Bracket::Plus => ab + ba,
        })
    }

    /// `(ab + ba) / 2`, written `a . b` for the bivector contractions.
    pub fn symmetric_product(&self, other: &Self) -> Self {
        (*self * *other + *other * *self) * 0.5
    }

    /// `(ab - ba) / 2`.
    pub fn antisymmetric_product(&self, other: &Self) -> Self {
        (*self * *other - *other * *self) * 0.5
    }

    /// Algebraic trace, `weight * <X>_0`.
    pub fn trace(&self) -> f64 {
        self.sig.trace_weight() * self.scalar_part()
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        debug_assert!(tol > 0.0);
        (self.mul_unchecked(self) - *self).norm_inf() <= tol
    }

    /// `cos(angle) + self sin(angle)`; equals `exp(self angle)` when `self^2 = -1`.
    pub fn exp_unit(&self, angle: f64) -> Self {
        Self::scalar(self.sig, angle.cos()) + *self * angle.sin()
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).norm_inf()
    }

    /// One line per blade, `<blade-name> <coefficient>`, canonical order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (name, c) in self.sig.blade_names().iter().zip(self.coeffs()) {
            s.push_str(&format!("{name} {c:.16e}\n"));
        }
        s
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.sig, rhs.sig, "signature mismatch in add");
        for i in 0..self.sig.dim() {
            self.coeffs[i] += rhs.coeffs[i];
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!(self.sig, rhs.sig, "signature mismatch in sub");
        for i in 0..self.sig.dim() {
            self.coeffs[i] -= rhs.coeffs[i];
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for c in &mut self.coeffs {
            *c *= rhs;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl Div<f64> for Multivector {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * rhs.recip()
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.sig, rhs.sig, "signature mismatch in geometric product");
        self.mul_unchecked(&rhs)
    }
}

/// The algebra's central "symbol i": `e` in Cl(0,1), `e123` in Cl(3,0).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CentralUnit(Multivector);

impl CentralUnit {
    pub fn of(sig: Signature) -> Self {
        Self(Multivector::blade(sig, sig.dim() - 1))
    }

    pub fn value(&self) -> Multivector {
        self.0
    }
}

/// Named blades of Cl(0,1).
pub mod schrodinger {
    use super::{Multivector, Signature};

    pub const ONE: Multivector = Multivector::scalar(Signature::SCHRODINGER, 1.0);
    pub const E: Multivector = Multivector {
        sig: Signature::SCHRODINGER,
        coeffs: [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    };
}

/// Named blades of Cl(3,0).
pub mod pauli {
    use super::{Multivector, Signature, MAX_DIM};

    const fn unit(i: usize) -> Multivector {
        let mut coeffs = [0.0; MAX_DIM];
        coeffs[i] = 1.0;
        Multivector {
            sig: Signature::PAULI,
            coeffs,
        }
    }

    pub const ONE: Multivector = unit(0);
    pub const E1: Multivector = unit(1);
    pub const E2: Multivector = unit(2);
    pub const E3: Multivector = unit(3);
    pub const E23: Multivector = unit(4);
    pub const E13: Multivector = unit(5);
    pub const E12: Multivector = unit(6);
    pub const E123: Multivector = unit(7);

    /// The primitive idempotent `(1 + e3) / 2`.
    pub const EPSILON: Multivector = Multivector {
        sig: Signature::PAULI,
        coeffs: [0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0],
    };

    pub const BASIS_VECTORS: [Multivector; 3] = [E1, E2, E3];
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;
    use proptest::prelude::*;

    fn arb_mv(sig: Signature) -> impl Strategy<Value = Multivector> {
        proptest::collection::vec(-1.0f64..1.0, sig.dim())
            .prop_map(move |c| Multivector::from_coeffs(sig, &c).unwrap())
    }

    fn arb_sig() -> impl Strategy<Value = Signature> {
        prop_oneof![Just(Signature::SCHRODINGER), Just(Signature::PAULI)]
    }

    #[test]
    fn only_two_signatures() {
        assert!(Signature::new(0, 1).is_ok());
        assert!(Signature::new(3, 0).is_ok());
        assert_eq!(
            Signature::new(1, 3),
            Err(Error::UnsupportedSignature { p: 1, q: 3 })
        );
        assert_eq!(Signature::PAULI.dim(), 8);
        assert_eq!(Signature::SCHRODINGER.dim(), 2);
    }

    #[test]
    fn generator_squares() {
        assert_eq!(schrodinger::E * schrodinger::E, -schrodinger::ONE);
        for e in BASIS_VECTORS {
            assert_eq!(e * e, ONE);
        }
        assert_eq!(E123 * E123, -ONE);
        assert_eq!(E12 * E12, -ONE);
        assert_eq!(E13 * E13, -ONE);
        assert_eq!(E23 * E23, -ONE);
    }

    #[test]
    fn orthogonal_generators_anticommute() {
        assert_eq!(E1 * E2, E12);
        assert_eq!(E2 * E1, -E12);
        assert_eq!(E1 * E3, E13);
        assert_eq!(E3 * E1, -E13);
        assert_eq!(E2 * E3, E23);
        assert_eq!(E1 * E2 * E3, E123);
        assert_eq!(E12 * E3, E123);
        assert_eq!(E123 * E3, E12);
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let err = E1.geometric_product(&schrodinger::E).unwrap_err();
        assert!(matches!(err, Error::SignatureMismatch { .. }));
    }

    #[test]
    fn conjugation_of_mixed_element() {
        let a = ONE + E1 + E12 + E123;
        assert_eq!(a.conjugate(), ONE - E1 - E12 + E123);
        let u = Multivector::pauli_even([0.3, 0.4, -0.5, 0.1]);
        assert_eq!(u.conjugate(), Multivector::pauli_even([0.3, -0.4, 0.5, -0.1]));
    }

    #[test]
    fn grade_projection() {
        let a = ONE + 2.0 * E1 + 3.0 * E12;
        assert_eq!(a.grade(1).unwrap(), 2.0 * E1);
        assert_eq!(E123.grade(3).unwrap(), E123);
        assert!(matches!(a.grade(4), Err(Error::GradeOutOfRange { .. })));
        assert!(schrodinger::E.grade(2).is_err());
    }

    #[test]
    fn scalar_parts() {
        assert_eq!((3.0 * ONE + E2).scalar_part(), 3.0);
        assert_eq!((E1 * E1).scalar_part(), 1.0);
    }

    #[test]
    fn brackets() {
        assert_eq!(E1.commutator(&E2, Bracket::Minus).unwrap(), 2.0 * E12);
        assert_eq!(E1.commutator(&E1, Bracket::Minus).unwrap(), Multivector::zero(Signature::PAULI));
        let a = 0.5 * E1 - 2.0 * E13 + ONE;
        assert_eq!(a.commutator(&ONE, Bracket::Plus).unwrap(), 2.0 * a);
    }

    #[test]
    fn idempotents() {
        assert!(EPSILON.is_idempotent(DEFAULT_TOL));
        assert!(ONE.is_idempotent(DEFAULT_TOL));
        assert!(schrodinger::ONE.is_idempotent(DEFAULT_TOL));
        assert!(!E1.is_idempotent(DEFAULT_TOL));
        assert!(EPSILON.conjugate().max_abs_diff(&(ONE - EPSILON)) == 0.0);
    }

    #[test]
    fn central_units() {
        for sig in [Signature::SCHRODINGER, Signature::PAULI] {
            let i = CentralUnit::of(sig).value();
            assert_eq!(i * i, -Multivector::one(sig));
        }
        assert_eq!(CentralUnit::of(Signature::PAULI).value(), E123);
        assert_eq!(CentralUnit::of(Signature::SCHRODINGER).value(), schrodinger::E);
    }

    #[test]
    fn dump_is_canonical() {
        let d = (ONE + 2.0 * E13).dump();
        let lines: Vec<_> = d.lines().collect();
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[0], "1 1.0000000000000000e0");
        assert_eq!(lines[5], "e13 2.0000000000000000e0");
        assert!(lines[7].starts_with("e123 "));
    }

    #[test]
    fn exp_of_unit_bivector() {
        let r = E12.exp_unit(0.3);
        assert!((r * r.conjugate() - ONE).norm_inf() < 1e-15);
    }

    proptest! {
        #[test]
        fn associativity_cl01(a in arb_mv(Signature::SCHRODINGER), b in arb_mv(Signature::SCHRODINGER), c in arb_mv(Signature::SCHRODINGER)) {
            prop_assert!(((a * b) * c - a * (b * c)).norm_inf() <= 1e-12);
        }

        #[test]
        fn conjugation_is_involutive(sig in arb_sig(), c in proptest::collection::vec(-1.0f64..1.0, 8)) {
            let a = Multivector::from_coeffs(sig, &c[..sig.dim()]).unwrap();
            prop_assert_eq!(a.conjugate().conjugate(), a);
        }

        #[test]
        fn associativity_pauli(a in arb_mv(Signature::PAULI), b in arb_mv(Signature::PAULI), c in arb_mv(Signature::PAULI)) {
            prop_assert!(((a * b) * c - a * (b * c)).norm_inf() <= 1e-12);
        }

        #[test]
        fn conjugation_reverses_products(a in arb_mv(Signature::PAULI), b in arb_mv(Signature::PAULI)) {
            prop_assert!(((a * b).conjugate() - b.conjugate() * a.conjugate()).norm_inf() <= 1e-12);
            prop_assert_eq!(a.conjugate().conjugate(), a);
        }

        #[test]
        fn central_unit_commutes(a in arb_mv(Signature::PAULI), z in arb_mv(Signature::SCHRODINGER)) {
            let i3 = CentralUnit::of(Signature::PAULI).value();
            let i1 = CentralUnit::of(Signature::SCHRODINGER).value();
            prop_assert!(i3.commutator(&a, Bracket::Minus).unwrap().norm_inf() <= 1e-12);
            prop_assert!(i1.commutator(&z, Bracket::Minus).unwrap().norm_inf() <= 1e-12);
        }

        #[test]
        fn grade_decomposition_sums_back(a in arb_mv(Signature::PAULI)) {
            let mut sum = Multivector::zero(Signature::PAULI);
            for k in 0..=3 {
                sum += a.grade(k).unwrap();
            }
            prop_assert_eq!(sum, a);
        }

        #[test]
        fn scalar_part_is_cyclic(a in arb_mv(Signature::PAULI), b in arb_mv(Signature::PAULI)) {
            prop_assert!(((a * b).scalar_part() - (b * a).scalar_part()).abs() <= 1e-12);
        }

        #[test]
        fn cl01_is_the_complex_field(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0) {
            let z = num_complex::Complex64::new(a, b) * num_complex::Complex64::new(c, d);
            let m = Multivector::complex(a, b) * Multivector::complex(c, d);
            prop_assert!((m.get(0) - z.re).abs() <= 1e-12);
            prop_assert!((m.get(1) - z.im).abs() <= 1e-12);
        }
    }
}
