//! Phase-space grids, initial data and conversions between averages and
//! point values.
//!
//! All arrays are indexed `[i, j]` with `i` along x and `j` along v. Entry
//! `(i, j)` of every degree-of-freedom class owns the DOF at or next to the
//! lower-left corner of cell `(i, j)`:
//!
//! | array        | location                                   |
//! |--------------|--------------------------------------------|
//! | `nodes`      | point `(x_i, v_j)` (cell corner)           |
//! | `x_edge_avg` | average over `[x_i, x_{i+1}]` at `v = v_j` |
//! | `v_edge_avg` | average over `[v_j, v_{j+1}]` at `x = x_i` |
//! | `cell_avg`   | average over the cell                      |
//!
//! with `x_i = x_min + i dx`, `v_j = v_min + j dv`. Both directions are
//! periodic.

use std::f64::consts::PI;
use std::io::{self, BufRead, Write};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Rectangular periodic phase-space box with a uniform cell partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub n_x: usize,
    pub n_v: usize,
}

impl DomainSpec {
    pub fn new(x_min: f64, x_max: f64, v_min: f64, v_max: f64, n_x: usize, n_v: usize) -> Result<Self> {
        let d = DomainSpec {
            x_min,
            x_max,
            v_min,
            v_max,
            n_x,
            n_v,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.v_min, self.v_max]
            .iter()
            .all(|b| b.is_finite());
        if !finite {
            return Err(Error::Domain("bounds must be finite".into()));
        }
        if self.x_max <= self.x_min {
            return Err(Error::Domain(format!(
                "x_max = {} must exceed x_min = {}",
                self.x_max, self.x_min
            )));
        }
        if self.v_max <= self.v_min {
            return Err(Error::Domain(format!(
                "v_max = {} must exceed v_min = {}",
                self.v_max, self.v_min
            )));
        }
        if self.n_x < 4 || self.n_v < 4 {
            return Err(Error::Domain(format!(
                "need at least 4 cells per direction, got {} x {}",
                self.n_x, self.n_v
            )));
        }
        Ok(())
    }

    /// Same box at a different resolution.
    pub fn with_resolution(&self, n_x: usize, n_v: usize) -> Result<Self> {
        DomainSpec::new(self.x_min, self.x_max, self.v_min, self.v_max, n_x, n_v)
    }

    pub fn length_x(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn length_v(&self) -> f64 {
        self.v_max - self.v_min
    }

    pub fn dx(&self) -> f64 {
        self.length_x() / self.n_x as f64
    }

    pub fn dv(&self) -> f64 {
        self.length_v() / self.n_v as f64
    }

    /// Left edge of cell `i`.
    pub fn x_node(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    /// Lower edge of cell `j`.
    pub fn v_node(&self, j: usize) -> f64 {
        self.v_min + j as f64 * self.dv()
    }

    pub fn x_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn v_center(&self, j: usize) -> f64 {
        self.v_min + (j as f64 + 0.5) * self.dv()
    }

    /// Largest speed magnitude represented in the box.
    pub fn v_abs_max(&self) -> f64 {
        self.v_min.abs().max(self.v_max.abs())
    }
}

/// Benchmark family of the initial distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    WeakLandau,
    StrongLandau,
    TwoStream,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::WeakLandau => "weak_landau",
            ProblemKind::StrongLandau => "strong_landau",
            ProblemKind::TwoStream => "two_stream",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "weak_landau" => Some(ProblemKind::WeakLandau),
            "strong_landau" => Some(ProblemKind::StrongLandau),
            "two_stream" => Some(ProblemKind::TwoStream),
            _ => None,
        }
    }
}

/// Maxwellian (or two-beam) background with a cosine density perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub kind: ProblemKind,
    pub amplitude: f64,
    pub wavenumber: f64,
    /// Beam drift speed, only read for [`ProblemKind::TwoStream`].
    pub beam_velocity: f64,
}

impl InitialCondition {
    pub fn weak_landau() -> Self {
        InitialCondition {
            kind: ProblemKind::WeakLandau,
            amplitude: 1e-3,
            wavenumber: 0.5,
            beam_velocity: 0.0,
        }
    }

    pub fn strong_landau() -> Self {
        InitialCondition {
            amplitude: 0.5,
            kind: ProblemKind::StrongLandau,
            ..Self::weak_landau()
        }
    }

    pub fn two_stream() -> Self {
        InitialCondition {
            kind: ProblemKind::TwoStream,
            amplitude: 1e-3,
            wavenumber: 0.2,
            beam_velocity: 3.0,
        }
    }

    pub fn preset(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::WeakLandau => Self::weak_landau(),
            ProblemKind::StrongLandau => Self::strong_landau(),
            ProblemKind::TwoStream => Self::two_stream(),
        }
    }

    /// Reject data that does not fit the periodic box.
    pub fn validate(&self, domain: &DomainSpec) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::InitialCondition(format!(
                "amplitude must be >= 0, got {}",
                self.amplitude
            )));
        }
        if !self.wavenumber.is_finite() || !self.beam_velocity.is_finite() {
            return Err(Error::InitialCondition("parameters must be finite".into()));
        }
        let periods = self.wavenumber * domain.length_x() / (2.0 * PI);
        if (periods - periods.round()).abs() > 1e-9 * periods.abs().max(1.0) {
            return Err(Error::InitialCondition(format!(
                "k = {} gives {} periods over the box; must be an integer",
                self.wavenumber, periods
            )));
        }
        Ok(())
    }

    /// Velocity profile without the spatial perturbation.
    pub fn velocity_profile(&self, v: f64) -> f64 {
        let norm = 1.0 / (2.0 * PI).sqrt();
        match self.kind {
            ProblemKind::WeakLandau | ProblemKind::StrongLandau => norm * (-0.5 * v * v).exp(),
            ProblemKind::TwoStream => {
                let v0 = self.beam_velocity;
                0.5 * norm * ((-0.5 * (v - v0) * (v - v0)).exp() + (-0.5 * (v + v0) * (v + v0)).exp())
            }
        }
    }

    pub fn evaluate(&self, x: f64, v: f64) -> f64 {
        self.velocity_profile(v) * (1.0 + self.amplitude * (self.wavenumber * x).cos())
    }
}

/// How edge and cell averages of the initial data are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Five-point Gauss-Legendre per direction on every edge and cell.
    #[default]
    GaussLegendre,
    /// Simpson's rule on the half-spaced point lattice.
    Simpson,
}

impl Quadrature {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "analytic_quadrature" | "gauss_legendre" => Some(Quadrature::GaussLegendre),
            "simpson" => Some(Quadrature::Simpson),
            _ => None,
        }
    }
}

// Five-point Gauss-Legendre rule mapped to [0, 1].
const GL_NODES: [f64; 5] = [
    0.046_910_077_030_668_004,
    0.230_765_344_947_158_45,
    0.5,
    0.769_234_655_052_841_6,
    0.953_089_922_969_332,
];
const GL_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_54,
    0.239_314_335_249_683_23,
    0.284_444_444_444_444_45,
    0.239_314_335_249_683_23,
    0.118_463_442_528_094_54,
];

#[inline]
pub fn simpson_line_average(a: f64, mid: f64, b: f64) -> f64 {
    (a + 4.0 * mid + b) / 6.0
}

/// Tensor Simpson average over a cell from its four corners, four edge
/// midpoints and centre.
#[inline]
pub fn simpson_cell_average(corners: [f64; 4], edge_midpoints: [f64; 4], center: f64) -> f64 {
    let c: f64 = corners.iter().sum();
    let e: f64 = edge_midpoints.iter().sum();
    (c + 4.0 * e + 16.0 * center) / 36.0
}

/// Midpoint value of the quadratic with the given line average and
/// endpoint values.
#[inline]
pub fn center_from_line_average(avg: f64, left: f64, right: f64) -> f64 {
    (6.0 * avg - left - right) / 4.0
}

/// Centre value of the biquadratic with the given Simpson cell average,
/// corners and edge midpoints.
#[inline]
pub fn center_from_cell_average(avg: f64, corners: [f64; 4], edge_midpoints: [f64; 4]) -> f64 {
    let c: f64 = corners.iter().sum();
    let e: f64 = edge_midpoints.iter().sum();
    (36.0 * avg - c - 4.0 * e) / 16.0
}

/// Degrees of freedom of the split Active Flux layout.
#[derive(Debug, Clone, PartialEq)]
pub struct InhomogeneousGrid {
    pub domain: DomainSpec,
    pub nodes: Array2<f64>,
    pub x_edge_avg: Array2<f64>,
    pub v_edge_avg: Array2<f64>,
    pub cell_avg: Array2<f64>,
}

impl InhomogeneousGrid {
    pub fn zeros(domain: DomainSpec) -> Self {
        let shape = (domain.n_x, domain.n_v);
        InhomogeneousGrid {
            domain,
            nodes: Array2::zeros(shape),
            x_edge_avg: Array2::zeros(shape),
            v_edge_avg: Array2::zeros(shape),
            cell_avg: Array2::zeros(shape),
        }
    }

    pub fn init(domain: DomainSpec, ic: &InitialCondition, quadrature: Quadrature) -> Result<Self> {
        domain.validate()?;
        ic.validate(&domain)?;
        let shape = (domain.n_x, domain.n_v);
        let (dx, dv) = (domain.dx(), domain.dv());
        let nodes = Array2::from_shape_fn(shape, |(i, j)| ic.evaluate(domain.x_node(i), domain.v_node(j)));
        match quadrature {
            Quadrature::GaussLegendre => {
                let x_edge_avg = Array2::from_shape_fn(shape, |(i, j)| {
                    let v = domain.v_node(j);
                    gauss_average(|s| ic.evaluate(domain.x_node(i) + s * dx, v))
                });
                let v_edge_avg = Array2::from_shape_fn(shape, |(i, j)| {
                    let x = domain.x_node(i);
                    gauss_average(|s| ic.evaluate(x, domain.v_node(j) + s * dv))
                });
                let cell_avg = Array2::from_shape_fn(shape, |(i, j)| {
                    gauss_average(|s| {
                        let x = domain.x_node(i) + s * dx;
                        gauss_average(|r| ic.evaluate(x, domain.v_node(j) + r * dv))
                    })
                });
                Ok(InhomogeneousGrid {
                    domain,
                    nodes,
                    x_edge_avg,
                    v_edge_avg,
                    cell_avg,
                })
            }
            Quadrature::Simpson => {
                let lattice = HomogeneousGrid::init(domain, ic)?;
                Ok(lattice.to_inhomogeneous())
            }
        }
    }

    /// Recover the half-spaced point lattice: nodes are copied, edge
    /// midpoints come from line averages and centres from cell averages.
    pub fn to_point_lattice(&self) -> HomogeneousGrid {
        let (n_x, n_v) = (self.domain.n_x, self.domain.n_v);
        let mut points = Array2::zeros((2 * n_x, 2 * n_v));
        for i in 0..n_x {
            let ip = (i + 1) % n_x;
            for j in 0..n_v {
                let jp = (j + 1) % n_v;
                points[[2 * i, 2 * j]] = self.nodes[[i, j]];
                points[[2 * i + 1, 2 * j]] =
                    center_from_line_average(self.x_edge_avg[[i, j]], self.nodes[[i, j]], self.nodes[[ip, j]]);
                points[[2 * i, 2 * j + 1]] =
                    center_from_line_average(self.v_edge_avg[[i, j]], self.nodes[[i, j]], self.nodes[[i, jp]]);
            }
        }
        let m_x = 2 * n_x;
        let m_v = 2 * n_v;
        for i in 0..n_x {
            for j in 0..n_v {
                let (p, q) = (2 * i, 2 * j);
                let corners = [
                    points[[p, q]],
                    points[[(p + 2) % m_x, q]],
                    points[[p, (q + 2) % m_v]],
                    points[[(p + 2) % m_x, (q + 2) % m_v]],
                ];
                let mids = [
                    points[[p + 1, q]],
                    points[[p + 1, (q + 2) % m_v]],
                    points[[p, q + 1]],
                    points[[(p + 2) % m_x, q + 1]],
                ];
                points[[p + 1, q + 1]] = center_from_cell_average(self.cell_avg[[i, j]], corners, mids);
            }
        }
        HomogeneousGrid {
            domain: self.domain,
            points,
        }
    }

    pub fn is_finite(&self) -> bool {
        [&self.nodes, &self.x_edge_avg, &self.v_edge_avg, &self.cell_avg]
            .iter()
            .all(|a| a.iter().all(|v| v.is_finite()))
    }
}

fn gauss_average(mut f: impl FnMut(f64) -> f64) -> f64 {
    GL_NODES.iter().zip(GL_WEIGHTS).map(|(&s, w)| w * f(s)).sum()
}

/// Point values on the half-spaced lattice: `points[p, q]` sits at
/// `(x_min + p dx/2, v_min + q dv/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousGrid {
    pub domain: DomainSpec,
    pub points: Array2<f64>,
}

impl HomogeneousGrid {
    pub fn init(domain: DomainSpec, ic: &InitialCondition) -> Result<Self> {
        domain.validate()?;
        ic.validate(&domain)?;
        let (hx, hv) = (0.5 * domain.dx(), 0.5 * domain.dv());
        let points = Array2::from_shape_fn((2 * domain.n_x, 2 * domain.n_v), |(p, q)| {
            ic.evaluate(domain.x_min + p as f64 * hx, domain.v_min + q as f64 * hv)
        });
        Ok(HomogeneousGrid { domain, points })
    }

    /// Simpson line and cell averages of the lattice in the inhomogeneous
    /// layout.
    pub fn to_inhomogeneous(&self) -> InhomogeneousGrid {
        let d = self.domain;
        let (m_x, m_v) = (2 * d.n_x, 2 * d.n_v);
        let pt = |p: usize, q: usize| self.points[[p % m_x, q % m_v]];
        let shape = (d.n_x, d.n_v);
        let nodes = Array2::from_shape_fn(shape, |(i, j)| pt(2 * i, 2 * j));
        let x_edge_avg = Array2::from_shape_fn(shape, |(i, j)| {
            simpson_line_average(pt(2 * i, 2 * j), pt(2 * i + 1, 2 * j), pt(2 * i + 2, 2 * j))
        });
        let v_edge_avg = Array2::from_shape_fn(shape, |(i, j)| {
            simpson_line_average(pt(2 * i, 2 * j), pt(2 * i, 2 * j + 1), pt(2 * i, 2 * j + 2))
        });
        let cell_avg = self.cell_averages();
        InhomogeneousGrid {
            domain: d,
            nodes,
            x_edge_avg,
            v_edge_avg,
            cell_avg,
        }
    }

    /// Tensor Simpson cell averages, shape `(n_x, n_v)`.
    pub fn cell_averages(&self) -> Array2<f64> {
        let d = self.domain;
        let (m_x, m_v) = (2 * d.n_x, 2 * d.n_v);
        let pt = |p: usize, q: usize| self.points[[p % m_x, q % m_v]];
        Array2::from_shape_fn((d.n_x, d.n_v), |(i, j)| {
            let (p, q) = (2 * i, 2 * j);
            simpson_cell_average(
                [pt(p, q), pt(p + 2, q), pt(p, q + 2), pt(p + 2, q + 2)],
                [pt(p + 1, q), pt(p + 1, q + 2), pt(p, q + 1), pt(p + 2, q + 1)],
                pt(p + 1, q + 1),
            )
        })
    }

    pub fn is_finite(&self) -> bool {
        self.points.iter().all(|v| v.is_finite())
    }
}

/// Fourth-order point value at a cell centre from the 3x3 neighbourhood of
/// cell averages, applied to every cell (periodic).
pub fn histopolate_2d(cell_avg: &Array2<f64>) -> Array2<f64> {
    let (n_x, n_v) = cell_avg.dim();
    Array2::from_shape_fn((n_x, n_v), |(i, j)| {
        let at = |di: isize, dj: isize| {
            cell_avg[[
                (i as isize + di).rem_euclid(n_x as isize) as usize,
                (j as isize + dj).rem_euclid(n_v as isize) as usize,
            ]]
        };
        let sides = at(-1, 0) + at(1, 0) + at(0, -1) + at(0, 1);
        let diagonals = at(-1, -1) + at(1, -1) + at(-1, 1) + at(1, 1);
        (676.0 * at(0, 0) - 26.0 * sides + diagonals) / 576.0
    })
}

/// One-dimensional counterpart of [`histopolate_2d`] on a periodic slice.
pub fn histopolate_1d(averages: &[f64]) -> Vec<f64> {
    let n = averages.len();
    (0..n)
        .map(|k| (26.0 * averages[k] - averages[(k + n - 1) % n] - averages[(k + 1) % n]) / 24.0)
        .collect()
}

/// What a snapshot file holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotKind {
    CellAvg,
    Points,
}

impl SnapshotKind {
    pub fn name(&self) -> &'static str {
        match self {
            SnapshotKind::CellAvg => "cell_avg",
            SnapshotKind::Points => "points",
        }
    }
}

/// Parsed snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub kind: SnapshotKind,
    /// Indexed `[i, j]`, i.e. column, row of the file.
    pub data: Array2<f64>,
}

/// Write `data[i, j]` as a snapshot: one header line, then one row per `j`
/// with the `i` values comma-separated. `nx`/`nv` in the header are the
/// data dimensions.
pub fn write_snapshot<W: Write>(
    out: &mut W,
    t: f64,
    domain: &DomainSpec,
    kind: SnapshotKind,
    data: &Array2<f64>,
) -> io::Result<()> {
    let (nx, nv) = data.dim();
    writeln!(
        out,
        "# t={:e} nx={} nv={} xmin={:e} xmax={:e} vmin={:e} vmax={:e} kind={}",
        t,
        nx,
        nv,
        domain.x_min,
        domain.x_max,
        domain.v_min,
        domain.v_max,
        kind.name()
    )?;
    let mut line = String::new();
    for j in 0..nv {
        line.clear();
        for i in 0..nx {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:e}", data[[i, j]]));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(input: R) -> Result<Snapshot> {
    let bad = |msg: &str| Error::Shape(format!("snapshot: {msg}"));
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| bad("empty file"))?
        .map_err(|e| bad(&e.to_string()))?;
    let body = header.strip_prefix("# ").ok_or_else(|| bad("missing header"))?;
    let mut fields = std::collections::HashMap::new();
    for token in body.split_whitespace() {
        let (k, v) = token.split_once('=').ok_or_else(|| bad("malformed header token"))?;
        fields.insert(k, v);
    }
    let float = |k: &str| -> Result<f64> {
        fields
            .get(k)
            .ok_or_else(|| bad(&format!("missing {k}")))?
            .parse()
            .map_err(|_| bad(&format!("bad {k}")))
    };
    let int = |k: &str| -> Result<usize> {
        fields
            .get(k)
            .ok_or_else(|| bad(&format!("missing {k}")))?
            .parse()
            .map_err(|_| bad(&format!("bad {k}")))
    };
    let kind = match fields.get("kind").copied() {
        Some("cell_avg") => SnapshotKind::CellAvg,
        Some("points") => SnapshotKind::Points,
        _ => return Err(bad("unknown kind")),
    };
    let (nx, nv) = (int("nx")?, int("nv")?);
    let mut data = Array2::zeros((nx, nv));
    for j in 0..nv {
        let line = lines
            .next()
            .ok_or_else(|| bad("too few rows"))?
            .map_err(|e| bad(&e.to_string()))?;
        let values: Vec<&str> = line.split(',').collect();
        if values.len() != nx {
            return Err(bad(&format!("row {j} has {} values, expected {nx}", values.len())));
        }
        for (i, v) in values.iter().enumerate() {
            data[[i, j]] = v.trim().parse().map_err(|_| bad("bad value"))?;
        }
    }
    Ok(Snapshot {
        t: float("t")?,
        x_min: float("xmin")?,
        x_max: float("xmax")?,
        v_min: float("vmin")?,
        v_max: float("vmax")?,
        kind,
        data,
    })
}
