//! Perturbation intervals for the largest C-eigenvalue of `Ã = A + E`.
//!
//! Three two-sided bounds are produced for one `(A, E)` instance:
//!
//! * additive: `λ(A) ± λ(E)`
//! * spectral: `λ(A) ± ‖E‖₂`, with `‖E‖₂` the spectral norm of the slice
//!   unfolding of `E`
//! * quadratic: `√(λ(A)² + z_min(S_Ã − S_A))` to `√(λ(A)² + z_max(S_Ã − S_A))`
//!
//! Each contains `λ(Ã)`, and quadratic ⊆ additive ⊆ spectral.

use crate::error::{Error, Result};
use crate::spectral::{self, SolverConfig};
use crate::tensor::PiezoTensor;

/// Radicands of the quadratic bound may dip this far below zero from
/// rounding before they are treated as an error.
pub const RADICAND_BAND: f64 = 1e-8;
/// Endpoint slack for containment and nesting checks.
pub const SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "interval endpoints out of order: [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64, slack: f64) -> bool {
        self.lo - slack <= v && v <= self.hi + slack
    }

    /// `self ⊆ other`, endpoint-wise with `slack`.
    pub fn within(&self, other: &Interval, slack: f64) -> bool {
        other.lo - slack <= self.lo && self.hi <= other.hi + slack
    }
}

/// All scalars behind the three intervals for one `(A, E)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lambda_a: f64,
    pub lambda_e: f64,
    pub norm_e2: f64,
    pub zmin_diff: f64,
    pub zmax_diff: f64,
    pub interval_21: Interval,
    pub interval_24: Interval,
    pub interval_25: Interval,
}

impl BoundReport {
    /// Checks `λ_true` against all three intervals.
    pub fn contains(&self, lambda_true: f64, slack: f64) -> bool {
        [self.interval_21, self.interval_24, self.interval_25]
            .iter()
            .all(|iv| iv.contains(lambda_true, slack))
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value < 0.0 || value.is_nan() {
        return Err(Error::NegativeInput { name, value });
    }
    Ok(())
}

/// `[λ(A) − λ(E), λ(A) + λ(E)]`. The lower end is not clamped at zero.
pub fn bound_additive(lambda_a: f64, lambda_e: f64) -> Result<Interval> {
    nonnegative("lambda_a", lambda_a)?;
    nonnegative("lambda_e", lambda_e)?;
    Interval::new(lambda_a - lambda_e, lambda_a + lambda_e)
}

/// `[λ(A) − ‖E‖₂, λ(A) + ‖E‖₂]`.
pub fn bound_spectral(lambda_a: f64, norm_e2: f64) -> Result<Interval> {
    nonnegative("lambda_a", lambda_a)?;
    nonnegative("norm_e2", norm_e2)?;
    Interval::new(lambda_a - norm_e2, lambda_a + norm_e2)
}

/// `[√(λ(A)² + zmin), √(λ(A)² + zmax)]` with radicands clamped at zero only
/// inside the rounding band.
pub fn bound_quadratic(lambda_a: f64, zmin_diff: f64, zmax_diff: f64) -> Result<Interval> {
    nonnegative("lambda_a", lambda_a)?;
    if !(zmin_diff <= zmax_diff) {
        return Err(Error::InvalidInput(format!(
            "zmin_diff {zmin_diff} exceeds zmax_diff {zmax_diff}"
        )));
    }
    let base = lambda_a * lambda_a;
    let root = |radicand: f64| -> Result<f64> {
        if radicand < -RADICAND_BAND {
            return Err(Error::RadicandNegative { value: radicand });
        }
        Ok(radicand.max(0.0).sqrt())
    };
    Interval::new(root(base + zmin_diff)?, root(base + zmax_diff)?)
}

/// Solves everything needed for the three intervals of `(A, E)`.
///
/// `S_Ã` is lifted from `A + E` directly rather than expanded from `S_A` and
/// `S_E`.
pub fn full_report(a: &PiezoTensor, e: &PiezoTensor, cfg: &SolverConfig) -> Result<BoundReport> {
    let perturbed = a.add(e)?;
    let lambda_a = spectral::c_max_via_lift(a, cfg)
        .map_err(|err| err.context("largest C-eigenvalue of A"))?
        .lambda;
    let lambda_e = spectral::c_max_via_lift(e, cfg)
        .map_err(|err| err.context("largest C-eigenvalue of E"))?
        .lambda;
    let norm_e2 = e.unfold_spectral_norm();
    let diff = perturbed.lift().sub(&a.lift())?;
    let zmin_diff = spectral::z_min(&diff, cfg)
        .map_err(|err| err.context("smallest Z-eigenvalue of the lift difference"))?
        .lambda;
    let zmax_diff = spectral::z_max(&diff, cfg)
        .map_err(|err| err.context("largest Z-eigenvalue of the lift difference"))?
        .lambda;
    Ok(BoundReport {
        lambda_a,
        lambda_e,
        norm_e2,
        zmin_diff,
        zmax_diff,
        interval_21: bound_additive(lambda_a, lambda_e)?,
        interval_24: bound_spectral(lambda_a, norm_e2)?,
        interval_25: bound_quadratic(lambda_a, zmin_diff, zmax_diff)?,
    })
}

/// quadratic ⊆ additive ⊆ spectral, each endpoint with [`SLACK`].
pub fn check_nesting(r: &BoundReport) -> bool {
    r.interval_25.within(&r.interval_21, SLACK) && r.interval_21.within(&r.interval_24, SLACK)
}
