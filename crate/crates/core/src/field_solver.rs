//! Charge density moments, periodic spectral Poisson solve and the field
//! representations consumed by the velocity operators.
//!
//! Units are normalized: `eps0 = 1`, electron charge-to-mass ratio `-1`,
//! immobile ion background of unit density. The net charge is
//! `rho = 1 - n_e` and the field satisfies `dE/dx = rho`.
//!
//! The Poisson problem is always solved on the half-spaced station lattice
//! `x_min + p dx/2`, `p = 0..2 n_x`, so interface (`p` even) and centre
//! (`p` odd) values come out of one transform.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::phase_grid::{center_from_line_average, simpson_line_average, HomogeneousGrid, InhomogeneousGrid};

/// Net charge density along x.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensity {
    /// Point values at the cell interfaces `x_i`.
    pub interfaces: Vec<f64>,
    /// Point values at the cell centres.
    pub centers: Vec<f64>,
    /// Cell line averages; only the inhomogeneous layout carries them.
    pub line_averages: Option<Vec<f64>>,
}

impl ChargeDensity {
    /// Interleaved station values `[iface_0, centre_0, iface_1, ...]`.
    pub fn stations(&self) -> Vec<f64> {
        interleave(&self.interfaces, &self.centers)
    }
}

/// Centre representation of the field.
#[derive(Debug, Clone, PartialEq)]
pub enum CenterField {
    /// Simpson line averages over each cell (inhomogeneous layout).
    LineAverage(Vec<f64>),
    /// Point values at cell centres (homogeneous layout).
    Point(Vec<f64>),
}

/// Electric field in the form the operators need.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub interfaces: Vec<f64>,
    pub center: CenterField,
}

impl FieldProfile {
    pub fn zeros(n_x: usize, layout: Layout) -> Self {
        let center = match layout {
            Layout::Inhomogeneous => CenterField::LineAverage(vec![0.0; n_x]),
            Layout::Homogeneous => CenterField::Point(vec![0.0; n_x]),
        };
        FieldProfile {
            interfaces: vec![0.0; n_x],
            center,
        }
    }

    pub fn n_x(&self) -> usize {
        self.interfaces.len()
    }

    /// Centre point values; recovered from the line average when needed.
    pub fn center_points(&self) -> Vec<f64> {
        match &self.center {
            CenterField::Point(c) => c.clone(),
            CenterField::LineAverage(avg) => {
                let n = self.n_x();
                (0..n)
                    .map(|i| center_from_line_average(avg[i], self.interfaces[i], self.interfaces[(i + 1) % n]))
                    .collect()
            }
        }
    }

    /// The value the centre-row operators advect with: line average or
    /// centre point, depending on the layout.
    pub fn center_values(&self) -> &[f64] {
        match &self.center {
            CenterField::Point(c) | CenterField::LineAverage(c) => c,
        }
    }

    /// Interleaved station point values `[E_0, E_{1/2}, E_1, ...]`.
    pub fn stations(&self) -> Vec<f64> {
        interleave(&self.interfaces, &self.center_points())
    }

    pub fn max_abs(&self) -> f64 {
        self.interfaces
            .iter()
            .chain(self.center_values())
            .fold(0.0f64, |m, e| m.max(e.abs()))
    }
}

/// Which grid the field is destined for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Inhomogeneous,
    Homogeneous,
}

fn interleave(even: &[f64], odd: &[f64]) -> Vec<f64> {
    even.iter().zip(odd).flat_map(|(&a, &b)| [a, b]).collect()
}

fn split(stations: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let even = stations.iter().step_by(2).copied().collect();
    let odd = stations.iter().skip(1).step_by(2).copied().collect();
    (even, odd)
}

/// Net density from v-edge line averages (interfaces) and cell averages
/// (line averages), with centres recovered from the quadratic through both.
pub fn density_inhomogeneous(grid: &InhomogeneousGrid) -> ChargeDensity {
    let n_x = grid.domain.n_x;
    let dv = grid.domain.dv();
    let n_iface: Vec<f64> = grid.v_edge_avg.rows().into_iter().map(|r| dv * r.sum()).collect();
    let n_avg: Vec<f64> = grid.cell_avg.rows().into_iter().map(|r| dv * r.sum()).collect();
    let n_center: Vec<f64> = (0..n_x)
        .map(|i| center_from_line_average(n_avg[i], n_iface[i], n_iface[(i + 1) % n_x]))
        .collect();
    ChargeDensity {
        interfaces: n_iface.iter().map(|n| 1.0 - n).collect(),
        centers: n_center.iter().map(|n| 1.0 - n).collect(),
        line_averages: Some(n_avg.iter().map(|n| 1.0 - n).collect()),
    }
}

/// Net density at every lattice station by composite Simpson in v.
pub fn density_homogeneous(grid: &HomogeneousGrid) -> ChargeDensity {
    let dv = grid.domain.dv();
    let stations: Vec<f64> = grid
        .points
        .rows()
        .into_iter()
        .map(|row| {
            let s: f64 = row
                .iter()
                .enumerate()
                .map(|(q, &f)| if q % 2 == 0 { f / 3.0 } else { 2.0 * f / 3.0 })
                .sum();
            1.0 - dv * s
        })
        .collect();
    let (interfaces, centers) = split(&stations);
    ChargeDensity {
        interfaces,
        centers,
        line_averages: None,
    }
}

/// Spectral solver for `dE/dx = rho` on `m` equally spaced periodic
/// stations, with FFT plans cached across calls.
#[derive(Clone)]
pub struct PoissonSolver {
    length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PoissonSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PoissonSolver")
            .field("stations", &self.forward.len())
            .field("length", &self.length)
            .finish()
    }
}

impl PoissonSolver {
    pub fn new(stations: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        PoissonSolver {
            length,
            forward: planner.plan_fft_forward(stations),
            inverse: planner.plan_fft_inverse(stations),
        }
    }

    pub fn stations(&self) -> usize {
        self.forward.len()
    }

    /// Field at the same stations as `rho`. The mean of `rho` is discarded
    /// and the returned field has zero mean.
    pub fn solve(&self, rho: &[f64]) -> Vec<f64> {
        let m = self.stations();
        assert_eq!(rho.len(), m, "density length must match the planned size");
        let mut buf: Vec<Complex64> = rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        self.forward.process(&mut buf);
        let base = 2.0 * std::f64::consts::PI / self.length;
        buf[0] = Complex64::new(0.0, 0.0);
        for (n, c) in buf.iter_mut().enumerate().skip(1) {
            let mode = if n <= m / 2 { n as f64 } else { n as f64 - m as f64 };
            if m.is_multiple_of(2) && n == m / 2 {
                // Nyquist: the derivative of the real cosine mode is not representable
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            let kappa = base * mode;
            *c = Complex64::new(0.0, -1.0) * *c / kappa;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / m as f64;
        let mut e: Vec<f64> = buf.iter().map(|c| c.re * scale).collect();
        let mean = e.iter().sum::<f64>() / m as f64;
        e.iter_mut().for_each(|v| *v -= mean);
        e
    }
}

/// One-shot spectral solve on equally spaced periodic samples over a box of
/// the given length.
pub fn solve_poisson_spectral(rho: &[f64], length: f64) -> Vec<f64> {
    PoissonSolver::new(rho.len(), length).solve(rho)
}

/// Spectral solve on explicit station coordinates; rejects non-uniform
/// spacing or stations that do not tile the periodic box.
pub fn solve_poisson_at(positions: &[f64], rho: &[f64], length: f64) -> Result<Vec<f64>> {
    if positions.len() != rho.len() || positions.len() < 2 {
        return Err(Error::Shape(format!(
            "{} stations for {} density samples",
            positions.len(),
            rho.len()
        )));
    }
    let h = length / positions.len() as f64;
    let uniform = positions.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-10 * h);
    if !uniform {
        return Err(Error::NonUniformStations);
    }
    Ok(solve_poisson_spectral(rho, length))
}

/// Split station point values into the profile for the requested layout.
pub fn field_to_profile(stations: &[f64], layout: Layout) -> FieldProfile {
    let (interfaces, centers) = split(stations);
    let center = match layout {
        Layout::Homogeneous => CenterField::Point(centers),
        Layout::Inhomogeneous => {
            let n = interfaces.len();
            CenterField::LineAverage(
                (0..n)
                    .map(|i| simpson_line_average(interfaces[i], centers[i], interfaces[(i + 1) % n]))
                    .collect(),
            )
        }
    };
    FieldProfile { interfaces, center }
}

/// Density plus Poisson solve plus representation, as done after every
/// configuration-space step.
pub fn compute_field(solver: &PoissonSolver, density: &ChargeDensity, layout: Layout) -> FieldProfile {
    field_to_profile(&solver.solve(&density.stations()), layout)
}

/// `sum_p rho_p E_p` over the solve stations; vanishes for an exact
/// spectral solve.
pub fn rho_dot_e(density: &ChargeDensity, field: &FieldProfile) -> f64 {
    density
        .stations()
        .iter()
        .zip(field.stations())
        .map(|(r, e)| r * e)
        .sum()
}
