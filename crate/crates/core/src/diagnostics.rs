//! Monitored quantities, phase-space error against a block-averaged
//! reference, and exponential rate fits of the electric energy.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::field_solver::{rho_dot_e, ChargeDensity, FieldProfile};
use crate::phase_grid::DomainSpec;

pub const CSV_HEADER: &str = "t,electric_energy,mass,momentum,l2norm,kinetic_energy,total_energy,rho_dot_e";

/// One time sample of the monitored quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    /// `int E^2 dx`
    pub electric_energy: f64,
    pub mass: f64,
    pub momentum: f64,
    /// `int int f^2 dx dv`
    pub l2norm: f64,
    /// `int int v^2 f dx dv`
    pub kinetic_energy: f64,
    pub total_energy: f64,
    pub rho_dot_e: f64,
}

impl DiagnosticsRow {
    fn fields(&self) -> [f64; 8] {
        [
            self.t,
            self.electric_energy,
            self.mass,
            self.momentum,
            self.l2norm,
            self.kinetic_energy,
            self.total_energy,
            self.rho_dot_e,
        ]
    }

    /// Comma-separated values in [`CSV_HEADER`] order, round-trip exact.
    pub fn to_csv_line(&self) -> String {
        self.fields()
            .iter()
            .map(|v| format!("{v:e}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Shape(format!("diagnostics row: {e}")))?;
        if v.len() != 8 {
            return Err(Error::Shape(format!(
                "diagnostics row has {} columns, expected 8",
                v.len()
            )));
        }
        Ok(DiagnosticsRow {
            t: v[0],
            electric_energy: v[1],
            mass: v[2],
            momentum: v[3],
            l2norm: v[4],
            kinetic_energy: v[5],
            total_energy: v[6],
            rho_dot_e: v[7],
        })
    }
}

/// Composite Simpson weight of lattice station `p` with cell width `h`.
#[inline]
fn simpson_weight(p: usize, h: f64) -> f64 {
    if p.is_multiple_of(2) {
        h / 3.0
    } else {
        2.0 * h / 3.0
    }
}

/// `int E^2 dx` by composite Simpson on the half-spaced field lattice.
pub fn electric_energy(field: &FieldProfile, dx: f64) -> f64 {
    field
        .stations()
        .iter()
        .enumerate()
        .map(|(p, e)| simpson_weight(p, dx) * e * e)
        .sum()
}

/// Evaluate all monitored quantities.
///
/// `cell_avg` has shape `(n_x, n_v)`; `lattice` is the half-spaced point
/// lattice of shape `(2 n_x, 2 n_v)` used for the Simpson integrals of `f^2`
/// and `v^2 f`.
pub fn conserved_quantities(
    t: f64,
    domain: &DomainSpec,
    cell_avg: &Array2<f64>,
    lattice: &Array2<f64>,
    field: &FieldProfile,
    density: &ChargeDensity,
) -> DiagnosticsRow {
    let (dx, dv) = (domain.dx(), domain.dv());
    let mut mass = 0.0;
    let mut momentum = 0.0;
    for j in 0..domain.n_v {
        let column: f64 = cell_avg.column(j).sum();
        mass += column;
        momentum += domain.v_center(j) * column;
    }
    mass *= dx * dv;
    momentum *= dx * dv;

    let mut l2 = 0.0;
    let mut kinetic = 0.0;
    for ((p, q), &f) in lattice.indexed_iter() {
        let w = simpson_weight(p, dx) * simpson_weight(q, dv);
        let v = domain.v_min + q as f64 * 0.5 * dv;
        l2 += w * f * f;
        kinetic += w * v * v * f;
    }
    let ee = electric_energy(field, dx);
    DiagnosticsRow {
        t,
        electric_energy: ee,
        mass,
        momentum,
        l2norm: l2,
        kinetic_energy: kinetic,
        total_energy: kinetic + ee,
        rho_dot_e: rho_dot_e(density, field),
    }
}

/// Block-average cell averages down to `target` cells per direction by
/// repeated 2x2 means.
pub fn downscale_reference(reference: &Array2<f64>, target: (usize, usize)) -> Result<Array2<f64>> {
    let (n_x, n_v) = reference.dim();
    for n in [n_x, n_v, target.0, target.1] {
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
    }
    if target.0 > n_x || target.1 > n_v {
        return Err(Error::Shape(format!(
            "cannot downscale {n_x}x{n_v} to the finer {}x{}",
            target.0, target.1
        )));
    }
    if n_x / target.0 != n_v / target.1 {
        return Err(Error::Shape("downscaling factors differ per direction".into()));
    }
    let mut current = reference.clone();
    while current.dim() != target {
        let (a, b) = current.dim();
        current = Array2::from_shape_fn((a / 2, b / 2), |(i, j)| {
            0.25 * (current[[2 * i, 2 * j]]
                + current[[2 * i + 1, 2 * j]]
                + current[[2 * i, 2 * j + 1]]
                + current[[2 * i + 1, 2 * j + 1]])
        });
    }
    Ok(current)
}

/// Relative L1 distance `sum |sol - ref| / sum |ref|`.
pub fn eps_vp(solution: &Array2<f64>, reference: &Array2<f64>) -> Result<f64> {
    if solution.dim() != reference.dim() {
        return Err(Error::Shape(format!(
            "solution {:?} vs reference {:?}",
            solution.dim(),
            reference.dim()
        )));
    }
    let num: f64 = solution.iter().zip(reference).map(|(a, b)| (a - b).abs()).sum();
    let den: f64 = reference.iter().map(|b| b.abs()).sum();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMode {
    /// Decay of the field amplitude through successive energy maxima;
    /// returns a positive rate for decay.
    DecayPeaks,
    /// Growth of the field amplitude over the whole window.
    Growth,
}

/// A local maximum of the energy trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub log_energy: f64,
}

/// Local maxima of `energy` with `t` in `[t0, t1]`, refined by the vertex
/// of the parabola through the log-energy of each maximum and its two
/// neighbours.
pub fn energy_peaks(t: &[f64], energy: &[f64], window: (f64, f64)) -> Vec<Peak> {
    let mut peaks = Vec::new();
    for k in 1..t.len().saturating_sub(1) {
        if t[k] < window.0 || t[k] > window.1 {
            continue;
        }
        let (a, b, c) = (energy[k - 1], energy[k], energy[k + 1]);
        if !(b >= a && b >= c) || a <= 0.0 || b <= 0.0 || c <= 0.0 {
            continue;
        }
        let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
        peaks.push(
            parabola_vertex((t[k - 1], la), (t[k], lb), (t[k + 1], lc)).unwrap_or(Peak {
                t: t[k],
                log_energy: lb,
            }),
        );
    }
    peaks
}

fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<Peak> {
    let (h0, h1) = (p1.0 - p0.0, p2.0 - p1.0);
    if h0 <= 0.0 || h1 <= 0.0 {
        return None;
    }
    let d0 = (p1.1 - p0.1) / h0;
    let d1 = (p2.1 - p1.1) / h1;
    let curvature = (d1 - d0) / (h0 + h1); // half the second derivative
    if curvature >= 0.0 {
        return None;
    }
    // q(t) = p1 + s (t - t1) + curvature (t - t1)^2 with s the centred slope
    let slope = d0 + curvature * h0;
    let offset = -slope / (2.0 * curvature);
    if offset.abs() > h0.max(h1) {
        return None;
    }
    Some(Peak {
        t: p1.0 + offset,
        log_energy: p1.1 + slope * offset + curvature * offset * offset,
    })
}

fn least_squares_slope(points: impl Iterator<Item = (f64, f64)>) -> (f64, usize) {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, pts.len());
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxy / sxx, pts.len())
}

/// Exponential rate of the field amplitude `sqrt(energy)` over a window.
pub fn fit_exponential_rate(t: &[f64], energy: &[f64], window: (f64, f64), mode: FitMode) -> Result<f64> {
    if t.len() != energy.len() {
        return Err(Error::Shape("time and energy series differ in length".into()));
    }
    match mode {
        FitMode::DecayPeaks => {
            let peaks = energy_peaks(t, energy, window);
            if peaks.len() < 3 {
                return Err(Error::InsufficientSamples {
                    found: peaks.len(),
                    needed: 3,
                });
            }
            let (slope, _) = least_squares_slope(peaks.iter().map(|p| (p.t, 0.5 * p.log_energy)));
            Ok(-slope)
        }
        FitMode::Growth => {
            let samples = t
                .iter()
                .zip(energy)
                .filter(|(&ti, &e)| ti >= window.0 && ti <= window.1 && e > 0.0)
                .map(|(&ti, &e)| (ti, 0.5 * e.ln()));
            let (slope, n) = least_squares_slope(samples);
            if n < 3 {
                return Err(Error::InsufficientSamples { found: n, needed: 3 });
            }
            Ok(slope)
        }
    }
}
