//! Shared fixtures for the kernel benchmarks.

use cliffqm_core::scenario::{Packet, SpinDirection};
use cliffqm_core::{Boundary, ColumnField, Grid, Multivector, Particle, Signature, StateDescriptor};

/// Normalised tilted-spin Gaussian on `[-20, 20]^dim`, `n` points per axis.
pub fn packet(dim: usize, n: usize, boundary: Boundary) -> ColumnField {
    let axes = vec![cliffqm_core::Axis::new(-20.0, 20.0, n); dim];
    let grid = Grid::new(&axes, boundary).expect("valid grid");
    let state = StateDescriptor::Gaussian {
        packet: Packet {
            center: vec![-2.0; dim],
            sigma: 1.0,
            k: vec![1.0; dim],
            weight: 1.0,
            phase: 0.0,
        },
        spin: SpinDirection { theta: 0.7, phi: 0.3 },
    };
    state.sample_normalized(grid, Particle::Pauli, 1.0, 0.0).expect("packet fits the grid")
}

/// Deterministic dense multivectors in `Cl(p, q)`.
pub fn multivectors(p: u8, q: u8, count: usize) -> Vec<Multivector> {
    let sig = Signature::new(p, q).expect("valid signature");
    let blades = 1usize << (p + q);
    (0..count)
        .map(|k| {
            let coeffs: Vec<f64> = (0..blades).map(|b| ((k * 31 + b * 17) as f64 * 0.37).sin()).collect();
            Multivector::from_coeffs(sig, &coeffs).expect("coefficient count matches")
        })
        .collect()
}
