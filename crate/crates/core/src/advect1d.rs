//! One-dimensional Active Flux kernels for constant-coefficient advection
//! `u_t + a u_x = 0` on periodic slices.
//!
//! Two families live here:
//!
//! * the original scheme, whose degrees of freedom are interface point
//!   values plus cell averages ([`AfSlice`]), updated by characteristic
//!   tracing of a continuous piecewise quadratic and a Simpson-in-time flux;
//! * the discrepancy-distribution scheme, whose degrees of freedom are
//!   point values only (interfaces and cell centres, [`dd_advance`]). A
//!   tracing predictor is followed by a correction that redistributes the
//!   mismatch between the predicted and the conservative cell average.
//!
//! Index conventions: for a slice of `n` cells, `interfaces[k]` sits on the
//! *left* edge of cell `k`; the right edge of cell `k` is
//! `interfaces[(k + 1) % n]`. Point lattices have length `2n` with
//! `points[2k]` the left interface of cell `k` and `points[2k + 1]` its
//! centre.
//!
//! Courant numbers are signed; a negative value means leftward transport.
//! The original scheme takes `nu = a dt / dx` with `|nu| <= 1`, the
//! discrepancy scheme takes `eta = 2 a dt / dx` with `|eta| <= 1`.

use crate::error::{CflViolation, Error, Result};

/// Stability bound on `|nu|` for the original scheme.
pub const AF_COURANT_LIMIT: f64 = 1.0;
/// Stability bound on `|eta| = 2|nu|` for the discrepancy scheme.
pub const DD_ETA_LIMIT: f64 = 1.0;

const COURANT_SLACK: f64 = 1e-12;

fn check_courant(courant: f64, limit: f64) -> Result<(), CflViolation> {
    if !courant.is_finite() || courant.abs() > limit * (1.0 + COURANT_SLACK) {
        return Err(CflViolation::new(courant, limit));
    }
    Ok(())
}

/// Evaluate the cell reconstruction
/// `q(z) = uL (z-1)(2z-1) + (6 avg - uL - uR) z(1-z) + uR z(2z-1)` at the
/// local coordinate `z` in `[0, 1]`.
#[inline]
pub fn reconstruct_eval(u_left: f64, u_avg: f64, u_right: f64, zeta: f64) -> f64 {
    u_left * (zeta - 1.0) * (2.0 * zeta - 1.0)
        + (6.0 * u_avg - u_left - u_right) * zeta * (1.0 - zeta)
        + u_right * zeta * (2.0 * zeta - 1.0)
}

/// Traced interface value after one step.
///
/// `cell = [left, average, right]` is the *upwind* cell: for `nu >= 0` its
/// right interface is the one being updated, for `nu < 0` its left one.
#[inline]
pub fn af_update_interface(cell: [f64; 3], nu: f64) -> Result<f64, CflViolation> {
    check_courant(nu, AF_COURANT_LIMIT)?;
    Ok(af_interface_unchecked(cell, nu))
}

#[inline]
fn af_interface_unchecked(cell: [f64; 3], nu: f64) -> f64 {
    let [left, avg, right] = cell;
    if nu >= 0.0 {
        nu * (3.0 * nu - 2.0) * left + 6.0 * nu * (1.0 - nu) * avg + (1.0 - nu) * (1.0 - 3.0 * nu) * right
    } else {
        let mu = -nu;
        mu * (3.0 * mu - 2.0) * right + 6.0 * mu * (1.0 - mu) * avg + (1.0 - mu) * (1.0 - 3.0 * mu) * left
    }
}

/// Closed-form cell-average update.
///
/// The stencil is in ascending spatial order. For `nu >= 0` it is
/// `[u_{i-3/2}, avg_{i-1}, u_{i-1/2}, avg_i, u_{i+1/2}]`, for `nu < 0` it is
/// `[u_{i-1/2}, avg_i, u_{i+1/2}, avg_{i+1}, u_{i+3/2}]`; cell `i` is the one
/// being updated in both cases.
#[inline]
pub fn af_update_average(stencil: [f64; 5], nu: f64) -> Result<f64, CflViolation> {
    check_courant(nu, AF_COURANT_LIMIT)?;
    Ok(af_average_unchecked(stencil, nu))
}

#[inline]
fn af_average_unchecked(s: [f64; 5], nu: f64) -> f64 {
    if nu >= 0.0 {
        nu * nu * (nu - 1.0) * s[0]
            + nu * nu * (3.0 - 2.0 * nu) * s[1]
            + nu * (1.0 - nu) * s[2]
            + (1.0 - nu) * (1.0 - nu) * (1.0 + 2.0 * nu) * s[3]
            - nu * (1.0 - nu) * (1.0 - nu) * s[4]
    } else {
        let mu = -nu;
        mu * mu * (mu - 1.0) * s[4]
            + mu * mu * (3.0 - 2.0 * mu) * s[3]
            + mu * (1.0 - mu) * s[2]
            + (1.0 - mu) * (1.0 - mu) * (1.0 + 2.0 * mu) * s[1]
            - mu * (1.0 - mu) * (1.0 - mu) * s[0]
    }
}

/// Periodic slice of the original scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AfSlice {
    pub interfaces: Vec<f64>,
    pub averages: Vec<f64>,
}

impl AfSlice {
    pub fn new(interfaces: Vec<f64>, averages: Vec<f64>) -> Self {
        assert_eq!(interfaces.len(), averages.len(), "slice arrays must match");
        AfSlice { interfaces, averages }
    }

    pub fn len(&self) -> usize {
        self.averages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.averages.is_empty()
    }

    /// Upwind cell `[left, avg, right]` feeding interface `k`.
    #[inline]
    fn upwind_cell(&self, k: usize, nu: f64) -> [f64; 3] {
        let n = self.len();
        let cell = if nu >= 0.0 { (k + n - 1) % n } else { k };
        [
            self.interfaces[cell],
            self.averages[cell],
            self.interfaces[(cell + 1) % n],
        ]
    }

    #[inline]
    fn average_stencil(&self, k: usize, nu: f64) -> [f64; 5] {
        let n = self.len();
        let iface = |o: isize| self.interfaces[(k as isize + o).rem_euclid(n as isize) as usize];
        let avg = |o: isize| self.averages[(k as isize + o).rem_euclid(n as isize) as usize];
        if nu >= 0.0 {
            [iface(-1), avg(-1), iface(0), avg(0), iface(1)]
        } else {
            [iface(0), avg(0), iface(1), avg(1), iface(2)]
        }
    }

    /// Trace all interface values by `nu` without touching the averages.
    pub fn trace_interfaces(&self, nu: f64) -> Result<Vec<f64>, CflViolation> {
        check_courant(nu, AF_COURANT_LIMIT)?;
        if nu == 0.0 {
            return Ok(self.interfaces.clone());
        }
        Ok((0..self.len())
            .map(|k| af_interface_unchecked(self.upwind_cell(k, nu), nu))
            .collect())
    }

    /// One step using the closed-form interface and average updates.
    pub fn advance(&self, nu: f64) -> Result<AfSlice, CflViolation> {
        check_courant(nu, AF_COURANT_LIMIT)?;
        if nu == 0.0 {
            return Ok(self.clone());
        }
        let n = self.len();
        let mut interfaces = Vec::with_capacity(n);
        let mut averages = Vec::with_capacity(n);
        for k in 0..n {
            interfaces.push(af_interface_unchecked(self.upwind_cell(k, nu), nu));
            averages.push(af_average_unchecked(self.average_stencil(k, nu), nu));
        }
        Ok(AfSlice { interfaces, averages })
    }

    /// One step in flux form: interfaces traced to the half and full stage,
    /// Simpson-in-time fluxes, conservative average update. Adjacent cells
    /// share the same flux value, so `sum(averages)` telescopes.
    pub fn advance_flux_form(&self, nu: f64) -> Result<AfSlice, CflViolation> {
        check_courant(nu, AF_COURANT_LIMIT)?;
        if nu == 0.0 {
            return Ok(self.clone());
        }
        let half = self.trace_interfaces(0.5 * nu)?;
        let full = self.trace_interfaces(nu)?;
        let n = self.len();
        let flux: Vec<f64> = (0..n)
            .map(|k| simpson_time_flux(nu, self.interfaces[k], half[k], full[k]))
            .collect();
        let averages = (0..n).map(|k| self.averages[k] + flux[k] - flux[(k + 1) % n]).collect();
        Ok(AfSlice {
            interfaces: full,
            averages,
        })
    }
}

/// `dt/dx` times the Simpson-in-time flux `a/6 (u^n + 4u^{n+1/2} + u^{n+1})`.
#[inline]
fn simpson_time_flux(nu: f64, start: f64, half: f64, end: f64) -> f64 {
    nu / 6.0 * (start + 4.0 * half + end)
}

// ---------------------------------------------------------------------------
// Discrepancy distribution
// ---------------------------------------------------------------------------

/// Weights distributing the cell discrepancy to the centre (`alpha`) and to
/// the two interfaces (`beta`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionParams {
    alpha: f64,
    beta: f64,
}

impl DistributionParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let constraint = beta / 3.0 + 2.0 * alpha / 3.0;
        if !alpha.is_finite() || !beta.is_finite() || (constraint - 1.0).abs() > 1e-12 {
            return Err(Error::DistributionParams { alpha, beta });
        }
        Ok(DistributionParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for DistributionParams {
    fn default() -> Self {
        DistributionParams { alpha: 1.0, beta: 1.0 }
    }
}

/// Quadratic through `(-1, left)`, `(0, centre)`, `(1, right)`.
#[inline]
pub fn dd_reconstruct_eval(left: f64, centre: f64, right: f64, xi: f64) -> f64 {
    0.5 * xi * (xi - 1.0) * left + (1.0 - xi * xi) * centre + 0.5 * xi * (xi + 1.0) * right
}

#[inline]
fn simpson(left: f64, mid: f64, right: f64) -> f64 {
    (left + 4.0 * mid + right) / 6.0
}

/// Stage of the tracing predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Half,
    Full,
}

/// Tracing predictor on a point lattice of length `2n`.
///
/// Every point is moved back along the characteristic by `eta` (or `eta/2`
/// for [`Stage::Half`]) half-cell units and evaluated on the local quadratic.
pub fn dd_predict(points: &[f64], eta: f64, stage: Stage) -> Result<Vec<f64>, CflViolation> {
    check_courant(eta, DD_ETA_LIMIT)?;
    let shift = match stage {
        Stage::Half => 0.5 * eta,
        Stage::Full => eta,
    };
    Ok(predict_unchecked(points, shift))
}

fn predict_unchecked(points: &[f64], eta: f64) -> Vec<f64> {
    let m = points.len();
    debug_assert!(m.is_multiple_of(2));
    if eta == 0.0 {
        return points.to_vec();
    }
    let n = m / 2;
    let cell = |k: usize| (points[2 * k], points[2 * k + 1], points[(2 * k + 2) % m]);
    let mut out = vec![0.0; m];
    for k in 0..n {
        let (l, c, r) = cell(k);
        out[2 * k + 1] = dd_reconstruct_eval(l, c, r, -eta);
        if eta > 0.0 {
            // right interface of cell k
            out[(2 * k + 2) % m] = dd_reconstruct_eval(l, c, r, 1.0 - eta);
        } else {
            // left interface of cell k
            out[2 * k] = dd_reconstruct_eval(l, c, r, -1.0 - eta);
        }
    }
    out
}

/// Conservation correction.
///
/// Given the lattice before the step and the predictor at the half and full
/// stage, computes per-cell discrepancies
/// `delta_k = avg_k^n + F_{k-1/2} - F_{k+1/2} - avg_k^*`
/// (Simpson averages, Simpson-in-time fluxes) and adds `alpha delta_k` to
/// each centre and `beta (delta_{k-1} + delta_k) / 2` to each interface.
pub fn dd_correct(
    before: &[f64],
    predicted_half: &[f64],
    predicted_full: &[f64],
    eta: f64,
    params: DistributionParams,
) -> Result<Vec<f64>, CflViolation> {
    check_courant(eta, DD_ETA_LIMIT)?;
    let m = before.len();
    assert!(m.is_multiple_of(2) && predicted_half.len() == m && predicted_full.len() == m);
    if eta == 0.0 {
        return Ok(predicted_full.to_vec());
    }
    let n = m / 2;
    // dt/dx F = (eta/2)/6 (...)
    let nu = 0.5 * eta;
    let flux: Vec<f64> = (0..n)
        .map(|k| simpson_time_flux(nu, before[2 * k], predicted_half[2 * k], predicted_full[2 * k]))
        .collect();
    let delta: Vec<f64> = (0..n)
        .map(|k| {
            let r = (2 * k + 2) % m;
            let avg_before = simpson(before[2 * k], before[2 * k + 1], before[r]);
            let avg_pred = simpson(predicted_full[2 * k], predicted_full[2 * k + 1], predicted_full[r]);
            avg_before + flux[k] - flux[(k + 1) % n] - avg_pred
        })
        .collect();
    let mut out = predicted_full.to_vec();
    for k in 0..n {
        out[2 * k + 1] += params.alpha * delta[k];
        out[2 * k] += params.beta * 0.5 * (delta[(k + n - 1) % n] + delta[k]);
    }
    Ok(out)
}

/// Full discrepancy-distribution step: predict to both stages, correct.
pub fn dd_advance(points: &[f64], eta: f64, params: DistributionParams) -> Result<Vec<f64>, CflViolation> {
    check_courant(eta, DD_ETA_LIMIT)?;
    if eta == 0.0 {
        return Ok(points.to_vec());
    }
    let half = predict_unchecked(points, 0.5 * eta);
    let full = predict_unchecked(points, eta);
    dd_correct(points, &half, &full, eta, params)
}

/// Closed-form interface update of the discrepancy scheme.
///
/// `stencil` is `[u_{i-3/2}, u_{i-1}, u_{i-1/2}, u_i, u_{i+1/2}, u_{i+1}, u_{i+3/2}]`
/// in ascending order and the updated value is `u_{i+1/2}` (index 4), i.e.
/// lattice points `p-4..=p+2` for interface `p`. For negative `eta` pass
/// points `p-2..=p+4`; the stencil is mirrored internally.
pub fn dd_interface_closed_form(stencil: [f64; 7], eta: f64, params: DistributionParams) -> Result<f64, CflViolation> {
    check_courant(eta, DD_ETA_LIMIT)?;
    let (s, e) = oriented(stencil, eta);
    let b = params.beta;
    Ok(
        b * e / 48.0 * (e - 2.0) * (2.0 * e - 1.0) * s[0] - b * e / 12.0 * (e * e - 4.0 * e + 2.0) * s[1]
            + e / 48.0 * (2.0 * b * e * e - 23.0 * b * e + 14.0 * b + 24.0 * e - 24.0) * s[2]
            + e / 6.0 * (3.0 * b * e - 2.0 * b - 6.0 * e + 12.0) * s[3]
            - (2.0 * b * e * e * e + 19.0 * b * e * e - 14.0 * b * e - 24.0 * e * e + 72.0 * e - 48.0) / 48.0 * s[4]
            + b * e / 12.0 * (e * e + 2.0 * e - 2.0) * s[5]
            - b * e / 48.0 * (2.0 * e * e + e - 2.0) * s[6],
    )
}

/// Closed-form centre update exactly as commonly printed.
///
/// `stencil` is the 7-point neighbourhood centred on the centre value being
/// updated (index 3), for either sign of `eta`. Kept for cross-validation only: the `u_{i+1/2}` coefficient
/// carries a `12 alpha` term, so at `eta = 0` this does not reduce to the
/// identity. [`dd_advance`] is the normative update.
pub fn dd_center_closed_form_printed(
    stencil: [f64; 7],
    eta: f64,
    params: DistributionParams,
) -> Result<f64, CflViolation> {
    check_courant(eta, DD_ETA_LIMIT)?;
    let (s, e) = oriented(stencil, eta);
    let a = params.alpha;
    let (e2, e3) = (e * e, e * e * e);
    Ok((a * e3 + 2.0 * a * e2 - 2.0 * a * e - 6.0 * e2 + 6.0) / 6.0 * s[3]
        - (2.0 * a * e3 + a * e2 - 2.0 * a * e - 12.0 * e2 + 12.0 * a) / 24.0 * s[4]
        - (3.0 * a * e2 - 2.0 * a * e - 2.0 * e2 - 2.0 * e) / 4.0 * s[2]
        - (a * e3 - 4.0 * a * e2 + 2.0 * a * e) / 6.0 * s[1]
        + (2.0 * a * e3 - 5.0 * a * e2 + 2.0 * a * e) / 24.0 * s[0])
}

fn oriented(mut stencil: [f64; 7], eta: f64) -> ([f64; 7], f64) {
    if eta < 0.0 {
        stencil.reverse();
        (stencil, -eta)
    } else {
        (stencil, eta)
    }
}
