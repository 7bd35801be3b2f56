use crate::algebra::{CentralUnit, Multivector, Signature};
use crate::error::{Error, Result};
use crate::grid::{
    curl, gradient, gradient_angle, laplacian, node_mask, partial, time_derivative, time_derivative_angle, GridField,
    SnapshotSeries, ANGLE_PERIOD, NODE_THRESHOLD,
};
use crate::spinor::{CliffordDensityElement, ColumnField};
use crate::vec3::Vec3;

pub(crate) const NAN3: Vec3 = Vec3([f64::NAN; 3]);

/// Points where `rho` is above the node threshold.
pub fn valid_points(field: &ColumnField) -> Vec<bool> {
    node_mask(&field.rho(), NODE_THRESHOLD)
}

pub(crate) fn masked<V: Copy>(mut f: GridField<V>, valid: &[bool], nan: V) -> GridField<V> {
    for (v, ok) in f.values_mut().iter_mut().zip(valid) {
        if !ok {
            *v = nan;
        }
    }
    f
}

pub fn rotor_field(field: &ColumnField) -> GridField<Multivector> {
    field.spinors().map(|s| s.rotor())
}

/// `s = U e3 U~ / 2` for Pauli fields. Schrodinger fields carry the scalar
/// `1/2`, so that `S = i s = e/2` and both algebras share one momentum formula.
pub fn spin_field(field: &ColumnField) -> GridField<Multivector> {
    field.spinors().map(|s| match s.spin_vector() {
        Ok(v) => v.s,
        Err(_) => Multivector::scalar(Signature::SCHRODINGER, 0.5),
    })
}

/// `S = i s` with `i` the central unit.
pub fn spin_dual(s: &Multivector) -> Multivector {
    CentralUnit::of(s.signature()).value() * *s
}

pub fn spin_bivector_field(field: &ColumnField) -> GridField<Multivector> {
    spin_field(field).map(spin_dual)
}

/// Spin vector `s` as a plain 3-vector (zero for Schrodinger fields).
pub fn spin_vector_field(field: &ColumnField) -> GridField<Vec3> {
    let valid = valid_points(field);
    let s = spin_field(field).map(|m| if m.signature().is_pauli() { m.vector_part() } else { Vec3::ZERO });
    masked(s, &valid, NAN3)
}

/// `Omega^j = 2 (d_j U) U~` per grid axis, the alternative `-2 U d_j U~`,
/// and optionally `Omega_t = 2 (d_t U) U~`.
#[derive(Clone, Debug)]
pub struct OmegaField {
    pub spatial: Vec<GridField<Multivector>>,
    pub spatial_alt: Vec<GridField<Multivector>>,
    pub temporal: Option<GridField<Multivector>>,
}

pub fn omega_fields(
    u: &GridField<Multivector>,
    temporal: Option<(&SnapshotSeries<GridField<Multivector>>, usize)>,
) -> Result<OmegaField> {
    let dim = u.grid().dim();
    let mut spatial = Vec::with_capacity(dim);
    let mut spatial_alt = Vec::with_capacity(dim);
    for a in 0..dim {
        let du = partial(u, a);
        spatial.push(du.zip_map(u, |d, u| *d * u.conjugate() * 2.0));
        let du_rev = partial(&u.map(|u| u.conjugate()), a);
        spatial_alt.push(u.zip_map(&du_rev, |u, d| *u * *d * -2.0));
    }
    let temporal = match temporal {
        Some((series, k)) => {
            let du = time_derivative(series, k)?;
            Some(du.zip_map(series.frame(k), |d, u| *d * u.conjugate() * 2.0))
        }
        None => None,
    };
    Ok(OmegaField {
        spatial,
        spatial_alt,
        temporal,
    })
}

impl OmegaField {
    /// Largest gap between the two spatial forms over `valid` points.
    pub fn max_form_gap(&self, valid: &[bool]) -> f64 {
        let mut gap: f64 = 0.0;
        for (a, b) in self.spatial.iter().zip(&self.spatial_alt) {
            for i in (0..a.len()).filter(|&i| valid[i]) {
                gap = gap.max(a[i].max_abs_diff(&b[i]));
            }
        }
        gap
    }

    /// Largest non-bivector coefficient over `valid` points (the `e` part
    /// counts as the bivector grade in Cl(0,1)).
    pub fn max_impurity(&self, valid: &[bool]) -> f64 {
        let mut worst: f64 = 0.0;
        for f in self.spatial.iter().chain(self.temporal.iter()) {
            for i in (0..f.len()).filter(|&i| valid[i]) {
                let m = f[i];
                let c = m.coeffs();
                let bad = if m.signature().is_pauli() {
                    c[0].abs().max(m.vector_part().norm_inf()).max(c[7].abs())
                } else {
                    c[0].abs()
                };
                worst = worst.max(bad);
            }
        }
        worst
    }
}

fn rotor_window(series: &SnapshotSeries<ColumnField>, k: usize) -> Result<SnapshotSeries<GridField<Multivector>>> {
    Ok(series.window(k)?.map(rotor_field))
}

/// `P_j = -<Omega^j S>_0` on the grid axes.
pub fn momentum_from_omega(omega: &OmegaField, spin_bivector: &GridField<Multivector>) -> GridField<Vec3> {
    GridField::from_index(*spin_bivector.grid(), |i| {
        let mut p = Vec3::ZERO;
        for (a, om) in omega.spatial.iter().enumerate() {
            p.0[a] = -(om[i] * spin_bivector[i]).scalar_part();
        }
        p
    })
}

/// Bohm momentum `P_B = -Omega . S`; `grad S` for Schrodinger fields.
pub fn bohm_momentum(field: &ColumnField) -> GridField<Vec3> {
    let omega = omega_fields(&rotor_field(field), None).expect("spatial omega has no failure mode");
    let p = momentum_from_omega(&omega, &spin_bivector_field(field));
    masked(p, &valid_points(field), NAN3)
}

/// Non-scalar remainder of `-Omega^j S` per axis, kept as a diagnostic.
pub fn momentum_remainder(field: &ColumnField) -> Vec<GridField<Multivector>> {
    let omega = omega_fields(&rotor_field(field), None).expect("spatial omega has no failure mode");
    let sb = spin_bivector_field(field);
    omega
        .spatial
        .iter()
        .map(|om| {
            om.zip_map(&sb, |o, s| {
                let m = *o * *s * -1.0;
                m - Multivector::scalar(m.signature(), m.scalar_part())
            })
        })
        .collect()
}

fn phase(field: &GridField<num_complex::Complex64>) -> GridField<f64> {
    field.map(|z| z.arg())
}

/// Weighted mean `rho P = sum_c rho_c grad S_c` over the column components.
pub fn bohm_momentum_weighted(field: &ColumnField) -> GridField<Vec3> {
    let rho = field.rho();
    let mut acc = GridField::from_index(*field.grid(), |_| Vec3::ZERO);
    for c in field.components() {
        let grad = gradient_angle(&phase(c), ANGLE_PERIOD);
        for (i, v) in acc.values_mut().iter_mut().enumerate() {
            *v += grad[i] * c[i].norm_sqr();
        }
    }
    let p = acc.zip_map(&rho, |v, r| *v / *r);
    masked(p, &valid_points(field), NAN3)
}

/// `theta`, `phi`, `chi` and `R` sampled pointwise.
#[derive(Clone, Debug)]
pub struct EulerField {
    pub theta: GridField<f64>,
    pub phi: GridField<f64>,
    pub chi: GridField<f64>,
    pub amplitude: GridField<f64>,
}

pub fn euler_field(field: &ColumnField) -> Result<EulerField> {
    if !field.is_pauli() {
        return Err(Error::Unsupported {
            op: "euler_field",
            signature: field.signature(),
        });
    }
    let angles = field.spinors().map(|s| s.to_euler().expect("pauli spinor"));
    Ok(EulerField {
        theta: angles.map(|e| e.theta),
        phi: angles.map(|e| e.phi),
        chi: angles.map(|e| e.chi),
        amplitude: angles.map(|e| e.amplitude),
    })
}

/// `P = (grad chi + cos(theta) grad phi) / 2`.
pub fn bohm_momentum_euler(field: &ColumnField) -> Result<GridField<Vec3>> {
    let e = euler_field(field)?;
    let gchi = gradient_angle(&e.chi, ANGLE_PERIOD);
    let gphi = gradient_angle(&e.phi, ANGLE_PERIOD);
    let p = GridField::from_index(*field.grid(), |i| (gchi[i] + gphi[i] * e.theta[i].cos()) * 0.5);
    Ok(masked(p, &valid_points(field), NAN3))
}

/// Bohm energy `E_B = <Omega_t S>_0` at frame `k`; `-d_t S` for Schrodinger fields.
pub fn bohm_energy(series: &SnapshotSeries<ColumnField>, k: usize) -> Result<GridField<f64>> {
    let us = rotor_window(series, k)?;
    let omega = omega_fields(us.frame(1), Some((&us, 1)))?;
    let now = series.frame(k);
    let sb = spin_bivector_field(now);
    let ot = omega.temporal.expect("temporal omega requested");
    let e = ot.zip_map(&sb, |o, s| (*o * *s).scalar_part());
    Ok(masked(e, &valid_points(now), f64::NAN))
}

/// Weighted mean `rho E = -sum_c rho_c d_t S_c`.
pub fn bohm_energy_weighted(series: &SnapshotSeries<ColumnField>, k: usize) -> Result<GridField<f64>> {
    let win = series.window(k)?;
    let now = series.frame(k);
    let rho = now.rho();
    let mut acc = GridField::from_index(*now.grid(), |_| 0.0);
    for c in 0..now.components().len() {
        let phases = win.map(|f| phase(&f.components()[c]));
        let dt = time_derivative_angle(&phases, 1, ANGLE_PERIOD)?;
        let comp = &now.components()[c];
        for (i, v) in acc.values_mut().iter_mut().enumerate() {
            *v -= dt[i] * comp[i].norm_sqr();
        }
    }
    let e = acc.zip_map(&rho, |v, r| v / r);
    Ok(masked(e, &valid_points(now), f64::NAN))
}

/// `E = -(d_t chi + cos(theta) d_t phi) / 2`.
pub fn bohm_energy_euler(series: &SnapshotSeries<ColumnField>, k: usize) -> Result<GridField<f64>> {
    let win = series.window(k)?;
    let eulers = win.frames().iter().map(euler_field).collect::<Result<Vec<_>>>()?;
    let chis = SnapshotSeries::from_times(win.times().to_vec(), eulers.iter().map(|e| e.chi.clone()).collect())?;
    let phis = SnapshotSeries::from_times(win.times().to_vec(), eulers.iter().map(|e| e.phi.clone()).collect())?;
    let dchi = time_derivative_angle(&chis, 1, ANGLE_PERIOD)?;
    let dphi = time_derivative_angle(&phis, 1, ANGLE_PERIOD)?;
    let theta = &eulers[1].theta;
    let e = GridField::from_index(*theta.grid(), |i| -(dchi[i] + theta[i].cos() * dphi[i]) * 0.5);
    Ok(masked(e, &valid_points(series.frame(k)), f64::NAN))
}

/// `W_k = rho^-1 d_k (rho S)` per grid axis.
pub fn w_field(rho: &GridField<f64>, spin_bivector: &GridField<Multivector>) -> Vec<GridField<Multivector>> {
    let weighted = spin_bivector.zip_map(rho, |s, r| *s * *r);
    (0..rho.grid().dim())
        .map(|a| partial(&weighted, a).zip_map(rho, |d, r| *d * (1.0 / r)))
        .collect()
}

/// Every route to the quantum potential.
///
/// `q` is `-lap R / 2mR` for Schrodinger fields and the density/spin form
/// `{S^2 [2 lap ln rho + (grad ln rho)^2] + S . lap S} / 2m` for Pauli
/// fields. `q1` and `q2` are the amplitude and Euler-angle parts, `q_w` the
/// `(grad W . S)/m + W^2/2m` route.
#[derive(Clone, Debug)]
pub struct QuantumPotential {
    pub q: GridField<f64>,
    pub q1: GridField<f64>,
    pub q2: GridField<f64>,
    pub q_w: GridField<f64>,
}

pub fn quantum_potential(field: &ColumnField, mass: f64) -> Result<QuantumPotential> {
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass {mass} must be positive")));
    }
    let valid = valid_points(field);
    let rho = field.rho();
    let r = rho.map(|x| x.sqrt());
    let lap_r = laplacian(&r);
    let q1 = lap_r.zip_map(&r, |l, r| -l / (2.0 * mass * r));

    let sb = spin_bivector_field(field);
    let q2 = if field.is_pauli() {
        let e = euler_field(field)?;
        let gt = gradient(&e.theta);
        let gp = gradient_angle(&e.phi, ANGLE_PERIOD);
        GridField::from_index(*field.grid(), |i| {
            let s = e.theta[i].sin();
            (gt[i].norm_sq() + s * s * gp[i].norm_sq()) / (8.0 * mass)
        })
    } else {
        rho.map(|_| 0.0)
    };

    let q = if field.is_pauli() {
        let ln = rho.map(|x| x.ln());
        let lap_ln = laplacian(&ln);
        let g_ln = gradient(&ln);
        let lap_s = laplacian(&sb);
        GridField::from_index(*field.grid(), |i| {
            let s2 = (sb[i] * sb[i]).scalar_part();
            let s_lap = (sb[i] * lap_s[i]).scalar_part();
            (s2 * (2.0 * lap_ln[i] + g_ln[i].norm_sq()) + s_lap) / (2.0 * mass)
        })
    } else {
        q1.clone()
    };

    let w = w_field(&rho, &sb);
    let mut q_w = rho.map(|_| 0.0);
    for (a, wk) in w.iter().enumerate() {
        let dw = partial(wk, a);
        for (i, v) in q_w.values_mut().iter_mut().enumerate() {
            *v += (2.0 * (dw[i] * sb[i]).scalar_part() + (wk[i] * wk[i]).scalar_part()) / (2.0 * mass);
        }
    }

    Ok(QuantumPotential {
        q: masked(q, &valid, f64::NAN),
        q1: masked(q1, &valid, f64::NAN),
        q2: masked(q2, &valid, f64::NAN),
        q_w: masked(q_w, &valid, f64::NAN),
    })
}

/// Convective and rotational currents with the velocity they define.
#[derive(Clone, Debug)]
pub struct Currents {
    pub conv: GridField<Vec3>,
    pub rot: GridField<Vec3>,
    pub total: GridField<Vec3>,
    pub velocity: GridField<Vec3>,
}

/// `m J_conv = rho P_B`, `m J_rot = curl(rho s)`, `v = (J_conv + J_rot) / rho`.
pub fn pauli_current(field: &ColumnField, mass: f64) -> Currents {
    let valid = valid_points(field);
    let rho = field.rho();
    let omega = omega_fields(&rotor_field(field), None).expect("spatial omega has no failure mode");
    let p = momentum_from_omega(&omega, &spin_bivector_field(field));
    let conv = p.zip_map(&rho, |p, r| *p * (*r / mass));
    let rot = if field.is_pauli() {
        let rs = spin_field(field).zip_map(&rho, |s, r| s.vector_part() * *r);
        curl(&rs).map(|c| *c / mass)
    } else {
        rho.map(|_| Vec3::ZERO)
    };
    let total = conv.zip_map(&rot, |a, b| *a + *b);
    let velocity = total.zip_map(&rho, |j, r| *j / *r);
    Currents {
        conv: masked(conv, &valid, NAN3),
        rot: masked(rot, &valid, NAN3),
        total: masked(total, &valid, NAN3),
        velocity: masked(velocity, &valid, NAN3),
    }
}

/// `<B> = tr(B rho_c)`.
pub fn expectation(b: &Multivector, cde: &CliffordDensityElement) -> Result<f64> {
    cde.expectation(b)
}
