//! Closed forms for the S2 factor at the phase-locked points.
//!
//! At `(phi_x, phi_y)` in `{pi/4, 5pi/4}^2` the mean of S3 vanishes and the
//! S2 factor reduces to `Y / |X|` with
//!
//! ```text
//! X = e^{-4kt} |alpha|^2 + s^2 - |beta|^2          (= <S1>)
//! Y = e^{-4kt} (|alpha|^2 + |beta|^2) + s^2        (= V2)
//! ```
//!
//! All times are dimensionless `kt`. With `u = e^{4kt}`, `X = 0` and
//! `X + Y = 0` are quadratics in `u`; their roots give the zero crossings of
//! `X` and the edges of the squeezing window.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::analytic::heisenberg::heisenberg_coeffs;
use crate::beam::{InputBeam, PHASE_LOCK_TOL};
use crate::error::{invalid, Error, Result};

/// Decomposition of the phase-locked S2 factor at one `kt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseLockedDecomposition {
    /// `X`, the signed mean of S1; the factor's denominator is `|X|`.
    pub x_mean: f64,
    /// `Y`, the variance of S2. Always positive.
    pub y_variance: f64,
    /// `x = e^{4kt} - 1`.
    pub growth: f64,
    /// Values of `x` at the window edges `(t1, t2)`, when the window exists.
    pub growth_window: Option<(f64, f64)>,
}

/// Which side of the intensity split the beam is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `|alpha|^2 > |beta|^2`: both zero crossings of X are positive.
    Case1,
    /// `|alpha|^2 <= |beta|^2`: the first zero crossing is at or before 0.
    Case2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCrossings {
    pub t01: f64,
    pub t02: f64,
    /// `t01 < 0`; reported, never clamped.
    pub t01_negative: bool,
}

/// Interval `(t1, t2)` where the phase-locked S2 factor is below one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowEdges {
    pub t1: f64,
    pub t2: f64,
}

impl WindowEdges {
    /// False when `t1 == t2`, i.e. the boundary case `|beta|^4 = 4|alpha|^2`.
    pub fn is_open(&self) -> bool {
        self.t2 > self.t1
    }

    pub fn contains(&self, kt: f64) -> bool {
        kt > self.t1 && kt < self.t2
    }
}

/// All characteristic times of a phase-locked beam, in `kt` units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingWindow {
    pub t01: Option<f64>,
    pub t02: Option<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub case_label: CaseLabel,
}

impl SqueezingWindow {
    /// `t01 <= t1 <= t2 <= t02` whenever all four exist and are non-negative.
    pub fn is_ordered(&self) -> bool {
        match (self.t01, self.t1, self.t2, self.t02) {
            (Some(t01), Some(t1), Some(t2), Some(t02)) if t01 >= 0.0 => t01 <= t1 && t1 <= t2 && t2 <= t02,
            (Some(_), Some(t1), Some(t2), Some(t02)) => t1 <= t2 && t2 <= t02,
            _ => true,
        }
    }

    /// Converts to absolute times for a coupling `k > 0`.
    pub fn to_absolute(&self, k: f64) -> Result<SqueezingWindow> {
        if !k.is_finite() || k <= 0.0 {
            return Err(invalid(format!("coupling k must be finite and > 0, got {k}")));
        }
        let f = |t: Option<f64>| t.map(|t| t / k);
        Ok(SqueezingWindow { t01: f(self.t01), t02: f(self.t02), t1: f(self.t1), t2: f(self.t2), ..*self })
    }
}

/// Minimum of the phase-locked S2 factor over `kt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimumResult {
    /// Minimal factor on the branch where X < 0. `f64::INFINITY` when X never
    /// turns negative (`|beta|^4 + |beta|^2 <= |alpha|^2`): the factor is then
    /// above one at every finite time.
    pub s2_min: f64,
    /// `kt` of the stationary point, `(1/4) ln(2 sqrt(1 + N) - 1)`.
    pub kt_min: f64,
    /// `|beta|^4 > 4 |alpha|^2`.
    pub squeezed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualIntensitySummary {
    pub zero_crossings: ZeroCrossings,
    pub window: Option<WindowEdges>,
    pub minimum: MinimumResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalPartition {
    pub s_min: f64,
    pub kt_min: f64,
    pub chi_opt: f64,
}

fn require_locked(beam: &InputBeam) -> Result<()> {
    if beam.is_phase_locked(PHASE_LOCK_TOL) {
        Ok(())
    } else {
        Err(invalid(format!("beam phases ({}, {}) are not phase-locked", beam.phi_x(), beam.phi_y())))
    }
}

fn check_intensity(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn kt_of(u: f64) -> f64 {
    u.ln() / 4.0
}

/// Phase-locked S2 factor `Y / |X|` and its decomposition.
pub fn phase_locked_s2(beam: &InputBeam, kt: f64) -> Result<(PhaseLockedDecomposition, f64)> {
    require_locked(beam)?;
    let h = heisenberg_coeffs(kt)?;
    let (a, b) = (beam.intensity_x(), beam.intensity_y());
    let shrink = (-4.0 * kt).exp();
    let x_mean = shrink * a + h.s * h.s - b;
    let y_variance = shrink * (a + b) + h.s * h.s;
    let decomposition = PhaseLockedDecomposition {
        x_mean,
        y_variance,
        growth: (4.0 * kt).exp_m1(),
        growth_window: growth_window(a, b),
    };
    if x_mean == 0.0 {
        return Err(Error::SingularBoundary { kt });
    }
    Ok((decomposition, y_variance / x_mean.abs()))
}

fn growth_window(a: f64, b: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a;
    (disc >= 0.0).then(|| (b - disc.sqrt(), b + disc.sqrt()))
}

/// The S2 factor as a function of `x = e^{4kt} - 1`:
/// `(4(|alpha|^2 + |beta|^2) + x^2) / |x^2 - 4|beta|^2 x - 4|beta|^2 + 4|alpha|^2|`.
pub fn s2_of_growth(intensity_x: f64, intensity_y: f64, x: f64) -> f64 {
    let (a, b) = (intensity_x, intensity_y);
    (4.0 * (a + b) + x * x) / (x * x - 4.0 * b * x - 4.0 * b + 4.0 * a).abs()
}

/// Zero crossings of `X` from intensities alone.
pub fn zero_crossings_for(intensity_x: f64, intensity_y: f64) -> Option<ZeroCrossings> {
    let (a, b) = (intensity_x, intensity_y);
    let disc = b * b + b - a;
    if disc < 0.0 {
        return None;
    }
    let root = 2.0 * disc.sqrt();
    let t01 = kt_of(1.0 + 2.0 * b - root);
    let t02 = kt_of(1.0 + 2.0 * b + root);
    Some(ZeroCrossings { t01, t02, t01_negative: t01 < 0.0 })
}

/// Zero crossings `(t01, t02)` of `X`, or `None` when
/// `|beta|^4 + |beta|^2 < |alpha|^2` and X stays positive.
pub fn x_zero_crossings(beam: &InputBeam) -> Result<Option<ZeroCrossings>> {
    require_locked(beam)?;
    Ok(zero_crossings_for(beam.intensity_x(), beam.intensity_y()))
}

/// Window edges from intensities alone.
pub fn window_for(intensity_x: f64, intensity_y: f64) -> Option<WindowEdges> {
    let (a, b) = (intensity_x, intensity_y);
    let disc = b * b - 4.0 * a;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    Some(WindowEdges { t1: kt_of(1.0 + b - root), t2: kt_of(1.0 + b + root) })
}

/// Edges `(t1, t2)` of the interval where the phase-locked S2 factor is
/// below one; `None` when `|beta|^4 < 4|alpha|^2`.
pub fn squeezing_window(beam: &InputBeam) -> Result<Option<WindowEdges>> {
    require_locked(beam)?;
    Ok(window_for(beam.intensity_x(), beam.intensity_y()))
}

/// Every characteristic time of a phase-locked beam.
pub fn window_report(beam: &InputBeam) -> Result<SqueezingWindow> {
    require_locked(beam)?;
    let (a, b) = (beam.intensity_x(), beam.intensity_y());
    let zc = zero_crossings_for(a, b);
    let w = window_for(a, b);
    Ok(SqueezingWindow {
        t01: zc.map(|z| z.t01),
        t02: zc.map(|z| z.t02),
        t1: w.map(|w| w.t1),
        t2: w.map(|w| w.t2),
        case_label: if a > b { CaseLabel::Case1 } else { CaseLabel::Case2 },
    })
}

/// Closed-form minimum from intensities alone.
pub fn minimum_for(intensity_x: f64, intensity_y: f64) -> MinimumResult {
    let (a, b) = (intensity_x, intensity_y);
    let total = a + b;
    let r = (1.0 + total).sqrt();
    // r - 1 without cancellation for small N
    let r_minus_one = total / (r + 1.0);
    let denominator = b - r_minus_one;
    let s2_min = if b * b + b > a && denominator > 0.0 { r_minus_one / denominator } else { f64::INFINITY };
    MinimumResult { s2_min, kt_min: kt_of(2.0 * r - 1.0), squeezed: b * b > 4.0 * a }
}

/// Minimum of the phase-locked S2 factor over `kt` and where it occurs.
pub fn s2_min(beam: &InputBeam) -> Result<MinimumResult> {
    require_locked(beam)?;
    Ok(minimum_for(beam.intensity_x(), beam.intensity_y()))
}

/// Specialization to `|alpha|^2 = |beta|^2 = intensity`.
pub fn equal_intensity_summary(intensity: f64) -> Result<EqualIntensitySummary> {
    check_intensity("intensity", intensity)?;
    let i = intensity;
    let zero_crossings = ZeroCrossings { t01: 0.0, t02: kt_of(1.0 + 4.0 * i), t01_negative: false };
    let disc = i * (i - 4.0);
    let window = (disc >= 0.0).then(|| {
        let root = disc.sqrt();
        WindowEdges { t1: kt_of(1.0 + i - root), t2: kt_of(1.0 + i + root) }
    });
    let r = (1.0 + 2.0 * i).sqrt();
    let s2_min = if i > 0.0 { (r - 1.0) / ((1.0 + i) - r) } else { f64::INFINITY };
    let minimum = MinimumResult { s2_min, kt_min: kt_of(2.0 * r - 1.0), squeezed: i > 4.0 };
    Ok(EqualIntensitySummary { zero_crossings, window, minimum })
}

/// `s2_min` at total photon number `N` split by the partition angle `chi`:
/// `|alpha|^2 = N cos^2 chi`, `|beta|^2 = N sin^2 chi`.
pub fn s2_min_at_partition(total: f64, chi: f64) -> Result<MinimumResult> {
    check_intensity("N", total)?;
    if !(0.0..=FRAC_PI_2).contains(&chi) {
        return Err(invalid(format!("chi must lie in [0, pi/2], got {chi}")));
    }
    let (sin, cos) = chi.sin_cos();
    let b = if chi == FRAC_PI_2 { total } else { total * sin * sin };
    let a = if chi == FRAC_PI_2 { 0.0 } else { total * cos * cos };
    Ok(minimum_for(a, b))
}

/// Best partition of `N` photons: everything in the y mode (`chi = pi/2`),
/// where the minimum is `1 / sqrt(1 + N)`.
pub fn optimal_partition(total: f64) -> Result<OptimalPartition> {
    if !total.is_finite() || total <= 0.0 {
        return Err(invalid(format!("N must be finite and > 0, got {total}")));
    }
    let m = minimum_for(0.0, total);
    Ok(OptimalPartition { s_min: m.s2_min, kt_min: m.kt_min, chi_opt: FRAC_PI_2 })
}
