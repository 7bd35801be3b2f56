//! Non-relativistic quantum mechanics inside the real Clifford algebras
//! Cl(0,1) and Cl(3,0): ideal spinors, density elements, Bohm observables,
//! conservation residuals and trajectories, with a matrix oracle.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod observables;
pub mod oracle;
pub mod scenario;
pub mod spinor;
pub mod vec3;

pub use algebra::{Bracket, CentralUnit, Multivector, Signature};
pub use error::{Error, Result};
pub use dynamics::{evolve, Evolution, EvolutionConfig, Scheme, TrajectorySet};
pub use grid::{Axis, Boundary, Grid, GridField, SnapshotSeries};
pub use spinor::{CliffordDensityElement, ColumnField, ColumnSpinor, EulerAngles, IdealSpinor, SpinVector};
pub use vec3::Vec3;
pub use scenario::{Particle, StateDescriptor};
