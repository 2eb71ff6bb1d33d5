//! Lie, Strang and fourth-order Yoshida compositions of the split
//! operators.

use crate::error::Result;

/// Forward weight of the outer Strang steps in the Yoshida composition.
pub const YOSHIDA_OUTER: f64 = 1.351_207_191_959_657_8;
/// Weight of the (negative) middle Strang step.
pub const YOSHIDA_MIDDLE: f64 = -1.702_414_383_919_315_3;

/// Yoshida weights computed from their defining formulas.
pub fn yoshida_weights() -> (f64, f64) {
    let cbrt2 = 2f64.cbrt();
    (1.0 / (2.0 - cbrt2), -cbrt2 / (2.0 - cbrt2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Lie,
    Strang,
    Yoshida,
}

impl Splitting {
    pub fn name(&self) -> &'static str {
        match self {
            Splitting::Lie => "lie",
            Splitting::Strang => "strang",
            Splitting::Yoshida => "yoshida",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lie" => Some(Splitting::Lie),
            "strang" => Some(Splitting::Strang),
            "yoshida" => Some(Splitting::Yoshida),
            _ => None,
        }
    }

    /// Largest `|sub-step| / dt` any operator sees.
    pub fn max_substep_ratio(&self) -> f64 {
        match self {
            Splitting::Lie | Splitting::Strang => 1.0,
            Splitting::Yoshida => YOSHIDA_MIDDLE.abs(),
        }
    }

    /// Ordered `(operator, signed step)` sequence for one step of size `dt`.
    pub fn schedule(&self, dt: f64) -> Vec<(SplitOp, f64)> {
        match self {
            Splitting::Lie => vec![(SplitOp::X, dt), (SplitOp::V, dt)],
            Splitting::Strang => strang(dt),
            Splitting::Yoshida => [YOSHIDA_OUTER, YOSHIDA_MIDDLE, YOSHIDA_OUTER]
                .iter()
                .flat_map(|g| strang(g * dt))
                .collect(),
        }
    }
}

fn strang(dt: f64) -> Vec<(SplitOp, f64)> {
    vec![(SplitOp::X, 0.5 * dt), (SplitOp::V, dt), (SplitOp::X, 0.5 * dt)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOp {
    X,
    V,
}

/// A state that can be advanced by the two split operators.
///
/// `apply_lx` must leave the field consistent with the new density (it ends
/// with a Poisson solve); `apply_lv` uses the current field unchanged.
pub trait SplitOperators {
    fn apply_lx(&mut self, dt: f64) -> Result<()>;
    fn apply_lv(&mut self, dt: f64) -> Result<()>;
}

/// Advance `state` by one composed step. A CFL error is labelled with the
/// splitting and the index of the failing sub-step. On error the state is
/// left at the last completed sub-step.
pub fn step<S: SplitOperators + ?Sized>(state: &mut S, dt: f64, splitting: Splitting) -> Result<()> {
    for (k, (op, h)) in splitting.schedule(dt).into_iter().enumerate() {
        let res = match op {
            SplitOp::X => state.apply_lx(h),
            SplitOp::V => state.apply_lv(h),
        };
        res.map_err(|e| e.within(format!("{} sub-step {}", splitting.name(), k + 1)))?;
    }
    Ok(())
}
