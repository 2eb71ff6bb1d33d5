//! Split-step Active Flux solvers for the 1D1V Vlasov-Poisson system.
//!
//! The distribution function is advanced by alternating constant-speed
//! advection in x and in v (`L_X`, `L_V`), each built from one-dimensional
//! Active Flux kernels, and composed by Lie, Strang or Yoshida splitting.
//! The field is recomputed by a spectral Poisson solve after every `L_X`.
//!
//! Three variants are provided: a second-order flux integral (`af2`), a
//! third-order nine-point flux integral (`af3`), both on the mixed
//! node/edge/cell layout, and a discrepancy-distribution scheme (`dd`) on a
//! pure point lattice.

pub mod advect1d;
pub mod diagnostics;
pub mod error;
pub mod field_solver;
pub mod operators2d;
pub mod phase_grid;
pub mod simulation;
pub mod time_splitting;

pub use advect1d::{AfSlice, DistributionParams};
pub use diagnostics::{DiagnosticsRow, FitMode, CSV_HEADER};
pub use error::{CflViolation, Error, Result};
pub use field_solver::{ChargeDensity, FieldProfile, Layout, PoissonSolver};
pub use phase_grid::{
    DomainSpec, HomogeneousGrid, InhomogeneousGrid, InitialCondition, ProblemKind, Quadrature, SnapshotKind,
};
pub use simulation::{
    convergence, run, ConvergenceRow, PhaseState, Recorder, RunObserver, Scheme, SimConfig, Simulation,
};
pub use time_splitting::Splitting;
