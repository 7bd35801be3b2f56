use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;

use super::*;
use crate::algebra::{pauli, schrodinger};
use crate::grid::{Axis, Boundary};
use crate::oracle;
use crate::spinor::{ColumnSpinor, EulerAngles, IdealSpinor};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ring(n: usize) -> Grid {
    Grid::line(0.0, 2.0 * PI, n, Boundary::Periodic).unwrap()
}

fn series(grid: Grid, dt: f64, f: impl Fn(Vec3, f64) -> ColumnSpinor) -> SnapshotSeries<ColumnField> {
    let frames = (0..3)
        .map(|n| ColumnField::from_fn(grid, |p| f(p, n as f64 * dt)).unwrap())
        .collect();
    SnapshotSeries::uniform(0.0, dt, frames).unwrap()
}

fn max_dev(f: &GridField<f64>, want: impl Fn(usize) -> f64) -> f64 {
    (0..f.len())
        .filter(|&i| f[i].is_finite())
        .fold(0.0, |m, i| m.max((f[i] - want(i)).abs()))
}

#[test]
fn omega_of_phase_rotor() {
    let g = ring(64);
    let k = 2.0;
    let h = g.h();
    let u = GridField::from_fn(g, |p| schrodinger::E.exp_unit(k * p.x()));
    let om = omega_fields(&u, None).unwrap();
    let want = 2.0 * (k * h).sin() / h;
    for m in om.spatial[0].values() {
        assert!(m.max_abs_diff(&(schrodinger::E * want)) < 1e-12);
    }
    assert!(om.max_form_gap(&vec![true; g.len()]) < 1e-12);

    let u = GridField::from_fn(g, |p| pauli::E12.exp_unit(k * p.x()));
    let om = omega_fields(&u, None).unwrap();
    for m in om.spatial[0].values() {
        assert!(m.max_abs_diff(&(pauli::E12 * want)) < 1e-12);
    }
    assert!(om.max_impurity(&vec![true; g.len()]) < 1e-12);

    let u = GridField::from_fn(g, |_| pauli::ONE);
    let om = omega_fields(&u, None).unwrap();
    assert!(om.spatial[0].values().iter().all(|m| m.norm_inf() == 0.0));
}

#[test]
fn momentum_examples() {
    let g = ring(128);
    let h = g.h();
    let k = 3.0;
    let plane = ColumnField::from_fn(g, |p| ColumnSpinor::Scalar(Complex64::from_polar(1.0, k * p.x()))).unwrap();
    let want = (k * h).sin() / h;
    for v in bohm_momentum(&plane).values() {
        assert!((v.x() - want).abs() < 1e-12);
    }

    let line = Grid::line(-6.0, 6.0, 121, Boundary::Clamped).unwrap();
    let gauss = ColumnField::from_fn(line, |p| ColumnSpinor::Scalar(c((-p.x() * p.x() / 4.0).exp(), 0.0))).unwrap();
    assert!(bohm_momentum(&gauss).values().iter().all(|v| v.x().abs() < 1e-14));

    let (k1, k2) = (1.0, 3.0);
    let pair = ColumnField::from_fn(g, |p| {
        ColumnSpinor::Pair(
            Complex64::from_polar(FRAC_1_SQRT_2, k1 * p.x()),
            Complex64::from_polar(FRAC_1_SQRT_2, k2 * p.x()),
        )
    })
    .unwrap();
    let want = ((k1 * h).sin() + (k2 * h).sin()) / (2.0 * h);
    for route in [bohm_momentum(&pair), bohm_momentum_weighted(&pair), bohm_momentum_euler(&pair).unwrap()] {
        for v in route.values() {
            assert!((v.x() - 2.0).abs() < 2e-2);
        }
    }
    for v in bohm_momentum(&pair).values() {
        assert!((v.x() - want).abs() < 1e-12);
    }
    for v in bohm_momentum_weighted(&pair).values() {
        assert!((v.x() - 2.0).abs() < 1e-12);
    }
}

#[test]
fn energy_examples() {
    let g = Grid::line(-2.0, 2.0, 41, Boundary::Clamped).unwrap();
    let (e, dt): (f64, f64) = (0.8, 1e-3);
    let want = (e * dt).sin() / dt;
    let stat = series(g, dt, |p, t| ColumnSpinor::Scalar(Complex64::from_polar(1.0 + 0.3 * p.x().sin(), -e * t)));
    assert!(max_dev(&bohm_energy(&stat, 1).unwrap(), |_| want) < 1e-10);
    assert!(max_dev(&bohm_energy_weighted(&stat, 1).unwrap(), |_| e) < 1e-10);

    let both = series(g, dt, |p, t| {
        let ph = Complex64::from_polar(1.0, -e * t);
        ColumnSpinor::Pair(c(1.0 + 0.2 * p.x(), 0.3) * ph, c(0.5, -0.4 * p.x()) * ph)
    });
    for route in [
        bohm_energy(&both, 1).unwrap(),
        bohm_energy_weighted(&both, 1).unwrap(),
        bohm_energy_euler(&both, 1).unwrap(),
    ] {
        assert!(max_dev(&route, |_| e) < 1e-6);
    }

    let frozen = series(g, dt, |p, _| ColumnSpinor::Scalar(c(2.0 + p.x(), 0.0)));
    assert!(max_dev(&bohm_energy(&frozen, 1).unwrap(), |_| 0.0) == 0.0);
    assert!(matches!(bohm_energy(&frozen, 0), Err(Error::BoundaryFrame { .. })));
}

#[test]
fn w_examples() {
    let g = Grid::line(-3.0, 3.0, 601, Boundary::Clamped).unwrap();
    let s = GridField::from_fn(g, |_| pauli::E12 * 0.5);
    let rho = GridField::from_fn(g, |p| (-p.x() * p.x()).exp());
    let w = w_field(&rho, &s);
    for i in 1..g.len() - 1 {
        let x = g.point(i).x();
        assert!(w[0][i].max_abs_diff(&(pauli::E12 * (-x))) < 1e-2);
    }
    let flat = GridField::from_fn(g, |_| 1.0);
    assert!(w_field(&flat, &s)[0].values().iter().all(|m| m.norm_inf() == 0.0));
}

#[test]
fn gaussian_quantum_potential() {
    let sigma: f64 = 1.0;
    let mut errs = Vec::new();
    for n in [201, 401] {
        let g = Grid::line(-5.0, 5.0, n, Boundary::Clamped).unwrap();
        let f = ColumnField::from_fn(g, |p| ColumnSpinor::Scalar(c((-p.x() * p.x() / (4.0 * sigma * sigma)).exp(), 0.0))).unwrap();
        let q = quantum_potential(&f, 1.0).unwrap();
        let want = |i: usize| {
            let x = g.point(i).x();
            1.0 / (4.0 * sigma * sigma) - x * x / (8.0 * sigma.powi(4))
        };
        assert!(q.q2.values().iter().all(|v| *v == 0.0));
        let inner = q.q_w.map(|v| *v);
        let inner = GridField::from_index(g, |i| if g.point(i).x().abs() <= 3.0 { inner[i] } else { f64::NAN });
        assert!(max_dev(&inner, want) < 1e-2);
        errs.push(max_dev(&q.q, want));
    }
    assert!(errs[0] < 5e-2);
    let slope = (errs[0] / errs[1]).log2();
    assert!((1.8..=2.2).contains(&slope), "slope {slope}");
}

#[test]
fn spin_part_of_quantum_potential() {
    let g = ring(200);
    let k = 2.0;
    let tex = ColumnField::from_fn(g, |p| {
        let (a, b) = EulerAngles::new(FRAC_PI_2, k * p.x(), 0.0, 1.0).to_components();
        ColumnSpinor::Pair(a, b)
    })
    .unwrap();
    let q = quantum_potential(&tex, 1.0).unwrap();
    assert!(max_dev(&q.q2, |_| k * k / 8.0) < 1e-3);
    assert!(max_dev(&q.q1, |_| 0.0) < 1e-12);
    assert!(max_dev(&q.q, |_| k * k / 8.0) < 2e-3);
    assert!(max_dev(&q.q_w, |_| k * k / 8.0) < 2e-3);

    let up = ColumnField::from_fn(g, |p| ColumnSpinor::Pair(c(1.0 + 0.5 * p.x().cos(), 0.0), c(0.0, 0.0))).unwrap();
    assert!(quantum_potential(&up, 1.0).unwrap().q2.values().iter().all(|v| *v == 0.0));
}

#[test]
fn quantum_potential_routes_agree_on_texture() {
    let g = Grid::new(&[Axis::new(0.0, 2.0 * PI, 96), Axis::new(0.0, 2.0 * PI, 96)], Boundary::Periodic).unwrap();
    let tex = ColumnField::from_fn(g, |p| {
        let (x, y) = (p.x(), p.y());
        ColumnSpinor::Pair(
            Complex64::from_polar(1.2 + 0.3 * x.sin(), 0.4 * (x + y).cos()),
            Complex64::from_polar(0.8 + 0.2 * y.cos(), x - 0.3 * y.sin()),
        )
    })
    .unwrap();
    let q = quantum_potential(&tex, 1.0).unwrap();
    let split = q.q1.zip_map(&q.q2, |a, b| a + b);
    assert!(max_dev(&q.q, |i| split[i]) < 5e-3);
    assert!(max_dev(&q.q_w, |i| split[i]) < 5e-3);
}

#[test]
fn current_examples() {
    let g = ring(64);
    let k = 2.0;
    let m = 2.0;
    let plane = ColumnField::from_fn(g, |p| {
        let ph = Complex64::from_polar(1.0, k * p.x());
        ColumnSpinor::Pair(ph * 0.6, ph * c(0.0, 0.8))
    })
    .unwrap();
    let j = pauli_current(&plane, m);
    let want = (k * g.h()).sin() / g.h() / m;
    for i in 0..g.len() {
        assert!(j.rot[i].norm_inf() < 1e-12);
        assert!((j.velocity[i].x() - want).abs() < 1e-12);
    }

    let g2 = Grid::new(&[Axis::new(-3.0, 3.0, 121), Axis::new(-3.0, 3.0, 121)], Boundary::Clamped).unwrap();
    let blob = ColumnField::from_fn(g2, |p| ColumnSpinor::Pair(c((-(p.x() * p.x() + p.y() * p.y()) / 2.0).exp(), 0.0), c(0.0, 0.0))).unwrap();
    let j = pauli_current(&blob, 1.0);
    for i in 0..g2.len() {
        if !g2.is_interior(i) {
            continue;
        }
        let p = g2.point(i);
        let rho = (-(p.x() * p.x() + p.y() * p.y())).exp();
        let grad = Vec3::new(-2.0 * p.x() * rho, -2.0 * p.y() * rho, 0.0);
        let want = grad.cross(&Vec3::new(0.0, 0.0, 0.5));
        assert!((j.rot[i] - want).norm_inf() < 5e-3);
        assert!(j.conv[i].norm_inf() < 1e-14);
    }

    let line = Grid::line(-4.0, 4.0, 81, Boundary::Clamped).unwrap();
    let gauss = ColumnField::from_fn(line, |p| ColumnSpinor::Scalar(c((-p.x() * p.x()).exp(), 0.0))).unwrap();
    assert!(pauli_current(&gauss, 1.0).total.values().iter().all(|v| v.norm_inf() < 1e-14));
}

#[test]
fn currents_match_oracle() {
    let g = Grid::new(&[Axis::new(0.0, 2.0 * PI, 64), Axis::new(0.0, 2.0 * PI, 64)], Boundary::Periodic).unwrap();
    let tex = ColumnField::from_fn(g, |p| {
        let (x, y) = (p.x(), p.y());
        ColumnSpinor::Pair(
            Complex64::from_polar(1.0 + 0.3 * y.sin(), x + 0.2 * y.cos()),
            Complex64::from_polar(0.7 + 0.2 * x.cos(), -0.5 * (x - y).sin()),
        )
    })
    .unwrap();
    let ours = pauli_current(&tex, 1.5);
    let theirs = oracle::messiah_current(&tex, 1.5);
    for i in 0..g.len() {
        assert!((ours.total[i] - theirs[i]).norm_inf() < 1e-2);
    }
}

#[test]
fn expectation_examples() {
    let up = IdealSpinor::from_components(c(1.0, 0.0), c(0.0, 0.0)).cde();
    assert_eq!(expectation(&pauli::ONE, &up).unwrap(), 1.0);
    assert_eq!(expectation(&pauli::E3, &up).unwrap(), 1.0);
    assert_eq!(expectation(&pauli::E1, &up).unwrap(), 0.0);
}

#[test]
fn plane_wave_satisfies_qhj() {
    let g = ring(256);
    let (k, m, dt) = (2.0, 1.0, 1e-4);
    let s = series(g, dt, |p, t| ColumnSpinor::Scalar(Complex64::from_polar(1.0, k * p.x() - k * k * t / (2.0 * m))));
    let obs = BohmObservables::compute(&s, 1, m, None).unwrap();
    let region = evaluation_region(s.frame(1), EVAL_THRESHOLD);
    let rep = obs.report(&region);
    assert!(rep["qhj"].max_abs < 5e-3);
    assert!(rep["continuity"].max_abs < 1e-10);
    assert!(rep["torque"].max_abs < 1e-6);
}

#[test]
fn uniform_state_has_zero_residuals() {
    let g = Grid::line(0.0, 1.0, 11, Boundary::Periodic).unwrap();
    let s = series(g, 0.1, |_, _| ColumnSpinor::Pair(c(0.6, 0.0), c(0.0, 0.8)));
    let obs = BohmObservables::compute(&s, 1, 1.0, None).unwrap();
    for f in obs.scalar_residuals.values() {
        assert!(f.values().iter().all(|v| v.abs() < 1e-14));
    }
    for f in obs.vector_residuals.values() {
        assert!(f.values().iter().all(|v| v.norm_inf() < 1e-14));
    }
}

#[test]
fn static_texture_has_no_torque() {
    let g = ring(64);
    let s = series(g, 0.1, |p, _| {
        let (a, b) = EulerAngles::new(1.0 + 0.3 * p.x().sin(), p.x(), 0.0, 1.0).to_components();
        ColumnSpinor::Pair(a, b)
    });
    let t = quantum_torque(&s, 1, 1.0, None).unwrap();
    assert!(t.torque.values().iter().all(|v| v.norm_inf() == 0.0));
}

#[test]
fn observables_ignore_global_phase() {
    let g = Grid::line(-3.0, 3.0, 61, Boundary::Clamped).unwrap();
    let dt = 1e-3;
    let make = |lambda: f64| {
        series(g, dt, move |p, t| {
            let env = (-p.x() * p.x() / 2.0).exp();
            let ph = Complex64::from_polar(1.0, lambda);
            ColumnSpinor::Pair(
                Complex64::from_polar(env, 0.7 * p.x() - 0.3 * t) * ph,
                Complex64::from_polar(0.5 * env, -0.2 * p.x() + 0.1 * t) * ph,
            )
        })
    };
    let a = BohmObservables::compute(&make(0.0), 1, 1.0, None).unwrap();
    let b = BohmObservables::compute(&make(2.3), 1, 1.0, None).unwrap();
    for i in 0..g.len() {
        assert!((a.momentum[i] - b.momentum[i]).norm_inf() < 1e-12);
        assert!((a.energy[i] - b.energy[i]).abs() < 1e-9);
        assert!((a.potential.q[i] - b.potential.q[i]).abs() < 1e-12);
        assert!((a.spin[i] - b.spin[i]).norm_inf() < 1e-12);
    }
}

