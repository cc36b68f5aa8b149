//! Convergence in the Fock-space truncation.
//!
//! A computation is repeated on a ladder of growing dimensions until two
//! consecutive rungs agree. The larger rung is reported.

use serde::Serialize;

use crate::beam::{check_kt, InputBeam};
use crate::error::{invalid, Error, Result};
use crate::moments::StokesMoments;
use crate::oracle::fock::{coherent_min_dim, DEFAULT_LEAK_TOL};
use crate::oracle::moments::oracle_moments_at;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub leak_tol: f64,
    pub growth_factor: f64,
    pub max_dim: usize,
    /// Largest relative drift between consecutive rungs that counts as converged.
    pub drift_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { leak_tol: DEFAULT_LEAK_TOL, growth_factor: 1.5, max_dim: 2048, drift_tol: 1e-8 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.leak_tol > 0.0 && self.leak_tol < 1e-4) {
            return Err(invalid(format!("leak_tol {} must lie in (0, 1e-4)", self.leak_tol)));
        }
        if !(self.growth_factor > 1.0) || !self.growth_factor.is_finite() {
            return Err(invalid(format!("growth factor {} must exceed 1", self.growth_factor)));
        }
        if self.max_dim < 16 {
            return Err(invalid(format!("max_dim {} is below 16", self.max_dim)));
        }
        if !(self.drift_tol > 0.0) {
            return Err(invalid("drift tolerance must be positive"));
        }
        Ok(())
    }

    /// Next rung: `ceil(dim * growth)` rounded up to a multiple of 16.
    pub fn grow(&self, dim: usize) -> usize {
        round16((dim as f64 * self.growth_factor).ceil() as usize)
    }
}

fn round16(d: usize) -> usize {
    d.div_ceil(16).max(1) * 16
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub dims: Vec<usize>,
    /// `drifts[i]` compares `dims[i]` with `dims[i + 1]`.
    pub drifts: Vec<f64>,
    pub final_dim: usize,
    pub drift: f64,
    pub moments: StokesMoments,
}

/// Runs `computation` on growing dimensions from `start_dim` until two
/// consecutive results agree within `policy.drift_tol`.
pub fn truncation_check<F>(computation: F, start_dim: usize, policy: &TruncationPolicy) -> Result<ConvergenceReport>
where
    F: Fn(usize) -> Result<StokesMoments>,
{
    let batch = truncation_check_batch(|d| computation(d).map(|m| vec![m]), start_dim, policy)?;
    let moments = batch.moments[0];
    Ok(ConvergenceReport {
        dims: batch.dims,
        drifts: batch.drifts,
        final_dim: batch.final_dim,
        drift: batch.drift,
        moments,
    })
}

/// Convergence of several moment sets that share one truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchConvergence {
    pub dims: Vec<usize>,
    pub drifts: Vec<f64>,
    pub final_dim: usize,
    /// Largest drift over the batch at the last step.
    pub drift: f64,
    pub moments: Vec<StokesMoments>,
}

/// Like [`truncation_check`], for a computation returning several moment
/// sets; the drift is the worst over the batch.
pub fn truncation_check_batch<F>(
    computation: F,
    start_dim: usize,
    policy: &TruncationPolicy,
) -> Result<BatchConvergence>
where
    F: Fn(usize) -> Result<Vec<StokesMoments>>,
{
    policy.validate()?;
    let mut dim = round16(start_dim.max(16)).min(policy.max_dim);
    let mut prev = computation(dim)?;
    let mut dims = vec![dim];
    let mut drifts = Vec::new();
    loop {
        let next = policy.grow(dim).min(policy.max_dim);
        if next <= dim {
            return Err(Error::NonConverged {
                drift: drifts.last().copied().unwrap_or(f64::INFINITY),
                dim,
                max_dim: policy.max_dim,
            });
        }
        let cur = computation(next)?;
        if cur.len() != prev.len() {
            return Err(invalid("batch size changed between truncations"));
        }
        let drift = prev.iter().zip(&cur).map(|(a, b)| a.max_relative_deviation(b)).fold(0.0, f64::max);
        dims.push(next);
        drifts.push(drift);
        if drift < policy.drift_tol {
            return Ok(BatchConvergence { dims, drifts, final_dim: next, drift, moments: cur });
        }
        dim = next;
        prev = cur;
    }
}

/// Starting truncation for a squeezed coherent state: the coherent bound at
/// the peak quadrature intensity plus the decay length of the squeezed-vacuum
/// tail, `|tanh 2kt|^n`, down to `1e-20`.
pub fn evolved_dim_hint(intensity: f64, kt: f64) -> usize {
    let (c, s) = ((2.0 * kt).cosh(), (2.0 * kt).sinh());
    let peak = (c + s).powi(2) * intensity + s * s;
    let tail = if kt > 0.0 { 20.0 * std::f64::consts::LN_10 / -(2.0 * kt).tanh().ln() } else { 0.0 };
    round16(coherent_min_dim(peak) + tail.ceil() as usize)
}

/// Converged oracle moments for `beam` after `kt`.
pub fn converged_moments(beam: &InputBeam, kt: f64, policy: &TruncationPolicy) -> Result<ConvergenceReport> {
    check_kt(kt)?;
    let start = evolved_dim_hint(beam.intensity_x(), kt);
    truncation_check(|d| oracle_moments_at(beam, kt, d), start, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::kernel::stokes_moments;

    #[test]
    fn ladder_rounds_to_sixteen() {
        let p = TruncationPolicy::default();
        assert_eq!(p.grow(32), 48);
        assert_eq!(p.grow(48), 80);
        assert_eq!(round16(17), 32);
    }

    #[test]
    fn converges_for_moderate_squeezing() {
        let beam = InputBeam::phase_locked(4.0, 9.0).unwrap();
        let r = converged_moments(&beam, 0.5, &TruncationPolicy::default()).unwrap();
        assert!(r.drift < 1e-8);
        let k = stokes_moments(&beam, 0.5).unwrap();
        assert!(r.moments.max_relative_deviation(&k) < 1e-8);
    }

    #[test]
    fn tiny_ceiling_reports_non_convergence() {
        let beam = InputBeam::phase_locked(10.0, 10.0).unwrap();
        let policy = TruncationPolicy { max_dim: 32, ..TruncationPolicy::default() };
        assert!(matches!(converged_moments(&beam, 0.5, &policy), Err(Error::NonConverged { max_dim: 32, .. })));
    }

    #[test]
    fn rejects_bad_policy() {
        for p in [
            TruncationPolicy { leak_tol: 0.0, ..Default::default() },
            TruncationPolicy { growth_factor: 1.0, ..Default::default() },
            TruncationPolicy { max_dim: 8, ..Default::default() },
        ] {
            assert!(p.validate().is_err());
        }
    }

    #[test]
    fn hint_grows_with_time() {
        assert!(evolved_dim_hint(10.0, 0.8) > evolved_dim_hint(10.0, 0.5));
        assert!(evolved_dim_hint(10.0, 0.0) >= coherent_min_dim(10.0));
    }
}
