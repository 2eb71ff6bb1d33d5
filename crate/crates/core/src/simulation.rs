//! Run configuration, the evolving phase-space state and the drivers for
//! single runs and convergence sweeps.

use std::f64::consts::PI;
use std::path::PathBuf;

use ndarray::Array2;
use rayon::prelude::*;

use crate::advect1d::DistributionParams;
use crate::diagnostics::{conserved_quantities, downscale_reference, eps_vp, DiagnosticsRow};
use crate::error::{Error, Result};
use crate::field_solver::{
    compute_field, density_homogeneous, density_inhomogeneous, ChargeDensity, FieldProfile, Layout, PoissonSolver,
};
use crate::operators2d::{lv_dd, lv_second_order, lv_third_order, lx_dd, lx_second_order, lx_third_order};
use crate::phase_grid::{DomainSpec, HomogeneousGrid, InhomogeneousGrid, InitialCondition, ProblemKind, Quadrature};
use crate::time_splitting::{self, SplitOperators, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Flux integral from products of line averages.
    Af2,
    /// Nine-point space-time flux integral.
    Af3,
    /// Discrepancy distribution on the point lattice.
    Dd,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Af2 => "af2",
            Scheme::Af3 => "af3",
            Scheme::Dd => "dd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "af2" => Some(Scheme::Af2),
            "af3" => Some(Scheme::Af3),
            "dd" => Some(Scheme::Dd),
            _ => None,
        }
    }

    /// Largest admissible configured CFL number.
    pub fn cfl_limit(&self) -> f64 {
        match self {
            Scheme::Af2 | Scheme::Af3 => 1.0,
            Scheme::Dd => 0.5,
        }
    }

    pub fn layout(&self) -> Layout {
        match self {
            Scheme::Af2 | Scheme::Af3 => Layout::Inhomogeneous,
            Scheme::Dd => Layout::Homogeneous,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub problem: InitialCondition,
    pub domain: DomainSpec,
    pub scheme: Scheme,
    pub splitting: Splitting,
    pub cfl: f64,
    pub t_max: f64,
    pub distribution: DistributionParams,
    pub init_quadrature: Quadrature,
    /// Emit diagnostics every this many steps (the final state is always
    /// sampled).
    pub diag_every: usize,
    pub snapshot_times: Vec<f64>,
    /// Field magnitude used in the velocity part of the time-step bound.
    pub e_max_estimate: f64,
    pub output_dir: PathBuf,
}

impl SimConfig {
    pub fn preset(kind: ProblemKind) -> Self {
        let (domain, t_max) = match kind {
            ProblemKind::WeakLandau => (DomainSpec::new(-2.0 * PI, 2.0 * PI, -5.0, 5.0, 64, 64), 15.0),
            ProblemKind::StrongLandau => (DomainSpec::new(-2.0 * PI, 2.0 * PI, -5.0, 5.0, 64, 64), 30.0),
            ProblemKind::TwoStream => (DomainSpec::new(-5.0 * PI, 5.0 * PI, -10.0, 10.0, 64, 64), 40.0),
        };
        SimConfig {
            problem: InitialCondition::preset(kind),
            domain: domain.expect("preset domains are valid"),
            scheme: Scheme::Af3,
            splitting: Splitting::Strang,
            cfl: 1.0 / PI,
            t_max,
            distribution: DistributionParams::default(),
            init_quadrature: Quadrature::GaussLegendre,
            diag_every: 1,
            snapshot_times: Vec::new(),
            e_max_estimate: 1.0,
            output_dir: PathBuf::from("output"),
        }
    }

    pub fn weak_landau() -> Self {
        Self::preset(ProblemKind::WeakLandau)
    }

    pub fn strong_landau() -> Self {
        Self::preset(ProblemKind::StrongLandau)
    }

    pub fn two_stream() -> Self {
        Self::preset(ProblemKind::TwoStream)
    }

    /// Same configuration on an `n x n` grid.
    pub fn with_resolution(&self, n: usize) -> Result<Self> {
        Ok(SimConfig {
            domain: self.domain.with_resolution(n, n)?,
            ..self.clone()
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.problem.validate(&self.domain)?;
        let limit = self.scheme.cfl_limit();
        if !(self.cfl > 0.0 && self.cfl <= limit) {
            return Err(Error::Config(format!(
                "cfl = {} outside (0, {limit}] for scheme {}",
                self.cfl,
                self.scheme.name()
            )));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.diag_every == 0 {
            return Err(Error::Config("diag_every must be at least 1".into()));
        }
        if !(self.e_max_estimate.is_finite() && self.e_max_estimate > 0.0) {
            return Err(Error::Config("e_max_estimate must be positive".into()));
        }
        if let Some(t) = self.snapshot_times.iter().find(|&&t| !(0.0..=self.t_max).contains(&t)) {
            return Err(Error::Config(format!("snapshot time {t} outside [0, t_max]")));
        }
        // re-check the distribution weights in case they were built by hand
        DistributionParams::new(self.distribution.alpha(), self.distribution.beta())?;
        Ok(())
    }

    /// Base step `cfl * min(dx / |v|_max, dv / E_est)`.
    pub fn base_dt(&self) -> f64 {
        let d = &self.domain;
        self.cfl * (d.dx() / d.v_abs_max()).min(d.dv() / self.e_max_estimate)
    }
}

/// Distribution function in the layout of the active scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseState {
    Inhomogeneous(InhomogeneousGrid),
    Homogeneous(HomogeneousGrid),
}

/// Evolving solution: distribution, field consistent with it, time.
#[derive(Debug, Clone)]
pub struct Simulation {
    scheme: Scheme,
    splitting: Splitting,
    params: DistributionParams,
    domain: DomainSpec,
    state: PhaseState,
    density: ChargeDensity,
    field: FieldProfile,
    solver: PoissonSolver,
    t: f64,
    steps: usize,
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let d = config.domain;
        let state = match config.scheme {
            Scheme::Af2 | Scheme::Af3 => {
                PhaseState::Inhomogeneous(InhomogeneousGrid::init(d, &config.problem, config.init_quadrature)?)
            }
            Scheme::Dd => PhaseState::Homogeneous(HomogeneousGrid::init(d, &config.problem)?),
        };
        let solver = PoissonSolver::new(2 * d.n_x, d.length_x());
        let mut sim = Simulation {
            scheme: config.scheme,
            splitting: config.splitting,
            params: config.distribution,
            domain: d,
            state,
            density: ChargeDensity {
                interfaces: Vec::new(),
                centers: Vec::new(),
                line_averages: None,
            },
            field: FieldProfile::zeros(d.n_x, config.scheme.layout()),
            solver,
            t: 0.0,
            steps: 0,
        };
        sim.refresh_field();
        Ok(sim)
    }

    fn refresh_field(&mut self) {
        self.density = match &self.state {
            PhaseState::Inhomogeneous(g) => density_inhomogeneous(g),
            PhaseState::Homogeneous(h) => density_homogeneous(h),
        };
        self.field = compute_field(&self.solver, &self.density, self.scheme.layout());
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn state(&self) -> &PhaseState {
        &self.state
    }

    pub fn field(&self) -> &FieldProfile {
        &self.field
    }

    pub fn density(&self) -> &ChargeDensity {
        &self.density
    }

    /// One composed step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        time_splitting::step(self, dt, self.splitting)
            .map_err(|e| e.within(format!("step {} (t = {})", self.steps + 1, self.t)))?;
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    /// Cell averages `(n_x, n_v)`; Simpson averages of the lattice for the
    /// point-value layout.
    pub fn cell_averages(&self) -> Array2<f64> {
        match &self.state {
            PhaseState::Inhomogeneous(g) => g.cell_avg.clone(),
            PhaseState::Homogeneous(h) => h.cell_averages(),
        }
    }

    /// Half-spaced point lattice `(2 n_x, 2 n_v)`.
    pub fn point_lattice(&self) -> Array2<f64> {
        match &self.state {
            PhaseState::Inhomogeneous(g) => g.to_point_lattice().points,
            PhaseState::Homogeneous(h) => h.points.clone(),
        }
    }

    pub fn diagnostics(&self) -> DiagnosticsRow {
        let lattice = self.point_lattice();
        conserved_quantities(
            self.t,
            &self.domain,
            &self.cell_averages(),
            &lattice,
            &self.field,
            &self.density,
        )
    }
}

impl SplitOperators for Simulation {
    fn apply_lx(&mut self, dt: f64) -> Result<()> {
        self.state = match (&self.state, self.scheme) {
            (PhaseState::Inhomogeneous(g), Scheme::Af2) => PhaseState::Inhomogeneous(lx_second_order(g, dt)?),
            (PhaseState::Inhomogeneous(g), Scheme::Af3) => PhaseState::Inhomogeneous(lx_third_order(g, dt)?),
            (PhaseState::Homogeneous(h), Scheme::Dd) => PhaseState::Homogeneous(lx_dd(h, dt, self.params)?),
            _ => unreachable!("layout always matches the scheme"),
        };
        self.refresh_field();
        Ok(())
    }

    fn apply_lv(&mut self, dt: f64) -> Result<()> {
        let field = &self.field;
        self.state = match (&self.state, self.scheme) {
            (PhaseState::Inhomogeneous(g), Scheme::Af2) => PhaseState::Inhomogeneous(lv_second_order(g, field, dt)?),
            (PhaseState::Inhomogeneous(g), Scheme::Af3) => PhaseState::Inhomogeneous(lv_third_order(g, field, dt)?),
            (PhaseState::Homogeneous(h), Scheme::Dd) => PhaseState::Homogeneous(lv_dd(h, field, dt, self.params)?),
            _ => unreachable!("layout always matches the scheme"),
        };
        Ok(())
    }
}

/// Receives output while a run progresses.
pub trait RunObserver {
    fn diagnostics(&mut self, _row: &DiagnosticsRow) -> Result<()> {
        Ok(())
    }

    fn snapshot(&mut self, _sim: &Simulation) -> Result<()> {
        Ok(())
    }
}

/// Observer that ignores everything.
pub struct Silent;

impl RunObserver for Silent {}

/// Observer that keeps every diagnostics row in memory.
#[derive(Debug, Default)]
pub struct Recorder {
    pub rows: Vec<DiagnosticsRow>,
}

impl RunObserver for Recorder {
    fn diagnostics(&mut self, row: &DiagnosticsRow) -> Result<()> {
        self.rows.push(*row);
        Ok(())
    }
}

/// Run from `t = 0` to `config.t_max`, landing exactly on every snapshot
/// time and on `t_max`. Returns the final state.
pub fn run(config: &SimConfig, observer: &mut dyn RunObserver) -> Result<Simulation> {
    let mut sim = Simulation::new(config)?;
    let dt = config.base_dt();
    let mut targets: Vec<f64> = config.snapshot_times.iter().copied().filter(|&t| t > 0.0).collect();
    targets.push(config.t_max);
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    let is_snapshot = |t: f64| config.snapshot_times.contains(&t);

    observer.diagnostics(&sim.diagnostics())?;
    if is_snapshot(0.0) {
        observer.snapshot(&sim)?;
    }
    for &target in &targets {
        while target - sim.t > 1e-9 * dt {
            let remaining = target - sim.t;
            sim.step(remaining.min(dt))?;
            // a full step that leaves only a sliver counts as landing
            let landed = target - sim.t <= 1e-9 * dt;
            if landed {
                sim.t = target;
            }
            let last = target == config.t_max && landed;
            if sim.steps % config.diag_every == 0 || last {
                observer.diagnostics(&sim.diagnostics())?;
            }
        }
        if is_snapshot(target) {
            observer.snapshot(&sim)?;
        }
    }
    Ok(sim)
}

/// One line of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub eps_vp: f64,
    /// Observed order against the previous (coarser) level.
    pub order: Option<f64>,
}

/// Run every level and the reference with the same configuration, block
/// average the reference onto each level and tabulate the relative L1
/// error.
pub fn convergence(config: &SimConfig, levels: &[usize], reference: usize) -> Result<Vec<ConvergenceRow>> {
    validate_levels(levels, reference)?;
    let mut all: Vec<usize> = levels.to_vec();
    all.push(reference);
    let finals = all
        .par_iter()
        .map(|&n| {
            let cfg = config.with_resolution(n)?;
            run(&cfg, &mut Silent).map(|sim| sim.cell_averages())
        })
        .collect::<Result<Vec<_>>>()?;
    let reference_avg = finals.last().expect("reference present");
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    for (k, &n) in levels.iter().enumerate() {
        let scaled = downscale_reference(reference_avg, (n, n))?;
        let eps = eps_vp(&finals[k], &scaled)?;
        let order = rows
            .last()
            .map(|prev| (prev.eps_vp / eps).ln() / (n as f64 / prev.n as f64).ln());
        rows.push(ConvergenceRow { n, eps_vp: eps, order });
    }
    Ok(rows)
}

fn validate_levels(levels: &[usize], reference: usize) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Config("at least one level is required".into()));
    }
    for &n in levels.iter().chain(std::iter::once(&reference)) {
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("levels must be strictly increasing".into()));
    }
    if levels.iter().any(|&n| n >= reference) {
        return Err(Error::Config(format!(
            "reference resolution {reference} must exceed every level"
        )));
    }
    Ok(())
}
