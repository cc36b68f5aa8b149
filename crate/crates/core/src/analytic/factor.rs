//! Squeezing factor along an axis and the comparison of squeezing criteria.

use serde::Serialize;

use crate::axis::{axis_complement_max, Axis};
use crate::error::{Error, Result};
use crate::moments::StokesMoments;

/// Which criteria classify `S_n` as squeezed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriteriaFlags {
    /// `V_n < <S0>`: variance below that of an equally intense coherent state.
    pub coherent_bound: bool,
    /// `V_n < |<S_l>|` for the best coordinate axis `l` perpendicular to `n`;
    /// `None` when no coordinate axis is perpendicular to `n`.
    pub coordinate_bound: Option<bool>,
    /// `V_n < sqrt(|<S>|^2 - <S_n>^2)`, the general criterion.
    pub general: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingReport {
    pub axis: Axis,
    pub variance: f64,
    /// `V_n / sqrt(|<S>|^2 - <S_n>^2)`.
    pub factor: f64,
    /// `1 - factor`.
    pub degree: f64,
    pub denominator: f64,
    pub criteria: CriteriaFlags,
}

impl SqueezingReport {
    pub fn is_squeezed(&self) -> bool {
        self.factor > 0.0 && self.factor < 1.0
    }
}

/// Threshold chain `<S_perp>^2/<S0> <= |<S_perp>| <= <S0>` together with the
/// verdict of each criterion. `S_perp` is the maximal perpendicular mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriteriaComparison {
    pub variance: f64,
    pub strict_threshold: f64,
    pub general_threshold: f64,
    pub coherent_threshold: f64,
    pub below_strict: bool,
    pub below_general: bool,
    pub below_coherent: bool,
    pub coordinate_bound: Option<bool>,
    /// Thresholds are ordered and the verdicts are nested accordingly.
    pub chain_ordered: bool,
}

const PERP_TOL: f64 = 1e-12;

/// Relative margin a variance must clear to count as below a threshold;
/// a coherent state sits exactly on the `<S0>` bound.
const BELOW_MARGIN: f64 = 1e-12;

fn below(variance: f64, threshold: f64) -> bool {
    variance < threshold - BELOW_MARGIN * threshold.abs()
}

fn coordinate_bound(moments: &StokesMoments, n: &Axis, variance: f64) -> Option<bool> {
    let best = Axis::COORDINATE
        .iter()
        .enumerate()
        .filter(|(_, e)| e.dot(&n.components()).abs() < PERP_TOL)
        .map(|(l, _)| moments.mean[l].abs())
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.max(m))))?;
    Some(below(variance, best))
}

pub fn squeezing_factor_axis(moments: &StokesMoments, n: &Axis) -> Result<SqueezingReport> {
    let denominator = axis_complement_max(moments, n);
    if !(denominator > 0.0) {
        return Err(Error::DegenerateAxis(format!(
            "mean Stokes vector has no component perpendicular to {:?}",
            n.components()
        )));
    }
    let variance = moments.variance_along(n);
    let factor = variance / denominator;
    Ok(SqueezingReport {
        axis: *n,
        variance,
        factor,
        degree: 1.0 - factor,
        denominator,
        criteria: CriteriaFlags {
            coherent_bound: below(variance, moments.mean0),
            coordinate_bound: coordinate_bound(moments, n, variance),
            general: below(variance, denominator),
        },
    })
}

pub fn criteria_compare(moments: &StokesMoments, n: &Axis) -> Result<CriteriaComparison> {
    let general = axis_complement_max(moments, n);
    if !(general > 0.0) || !(moments.mean0 > 0.0) {
        return Err(Error::DegenerateAxis("perpendicular mean or intensity is zero".into()));
    }
    let variance = moments.variance_along(n);
    let strict = general * general / moments.mean0;
    let coherent = moments.mean0;
    let below_strict = below(variance, strict);
    let below_general = below(variance, general);
    let below_coherent = below(variance, coherent);
    let slack = 1e-12 * coherent;
    let chain_ordered = strict <= general + slack
        && general <= coherent + slack
        && (!below_strict || below_general)
        && (!below_general || below_coherent);
    Ok(CriteriaComparison {
        variance,
        strict_threshold: strict,
        general_threshold: general,
        coherent_threshold: coherent,
        below_strict,
        below_general,
        below_coherent,
        coordinate_bound: coordinate_bound(moments, n, variance),
        chain_ordered,
    })
}
