//! Grid-and-refine exploration of squeezing factors.
//!
//! [`minimize_phase_time`] scans `(phi_x, phi_y, kt)` on a regular grid,
//! picks the discrete local minima and polishes each one with a compass
//! search. [`scan_axes`] finds the most squeezed direction on the Poincare
//! sphere, and [`region_map`] tabulates the phase-locked minimum over the
//! intensity plane.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::factor::{squeezing_factor_axis, SqueezingReport};
use crate::analytic::heisenberg::heisenberg_coeffs;
use crate::analytic::kernel::{stokes_moments, stokes_moments_from_modes, ModeMoments};
use crate::analytic::phase_locked::minimum_for;
use crate::axis::Axis;
use crate::beam::{canonical_phase, check_kt, phase_distance, InputBeam};
use crate::error::{invalid, Error, Result};
use crate::moments::StokesMoments;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub phi_x_points: usize,
    pub phi_y_points: usize,
    pub kt_points: usize,
    pub kt_max: f64,
    pub refine_iters: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self { phi_x_points: 64, phi_y_points: 64, kt_points: 128, kt_max: 1.5, refine_iters: 500 }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if self.phi_x_points < 8 || self.phi_y_points < 8 || self.kt_points < 8 {
            return Err(invalid("every grid count must be at least 8"));
        }
        if !(self.kt_max > 0.0) || !self.kt_max.is_finite() {
            return Err(invalid(format!("kt_max must be positive, got {}", self.kt_max)));
        }
        Ok(())
    }

    pub fn phi_x(&self, i: usize) -> f64 {
        TAU * i as f64 / self.phi_x_points as f64
    }

    pub fn phi_y(&self, j: usize) -> f64 {
        TAU * j as f64 / self.phi_y_points as f64
    }

    pub fn kt(&self, k: usize) -> f64 {
        self.kt_max * k as f64 / (self.kt_points - 1) as f64
    }

    /// Cell sizes along `(phi_x, phi_y, kt)`.
    pub fn spacing(&self) -> [f64; 3] {
        [TAU / self.phi_x_points as f64, TAU / self.phi_y_points as f64, self.kt_max / (self.kt_points - 1) as f64]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub phi_x: f64,
    pub phi_y: f64,
    pub kt: f64,
    pub axis: Axis,
    pub factor: f64,
}

impl SweepPoint {
    /// Distance in `(phi_x, phi_y, kt)`, with phases compared modulo `2 pi`.
    pub fn distance(&self, other: &SweepPoint) -> f64 {
        let dx = phase_distance(self.phi_x, other.phi_x);
        let dy = phase_distance(self.phi_y, other.phi_y);
        (dx * dx + dy * dy + (self.kt - other.kt).powi(2)).sqrt()
    }

    fn key(&self) -> (f64, f64, f64) {
        (self.phi_x, self.phi_y, self.kt)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaReport {
    /// Refined local minima, sorted by `(phi_x, phi_y, kt)`. Minima on either
    /// time edge of the grid are not reported: at `kt = 0` the state is
    /// coherent and the factor is flat at 1 along whole phase curves.
    pub minima: Vec<SweepPoint>,
    /// Best point over the whole grid, refined.
    pub global: SweepPoint,
    pub evaluated: usize,
    pub degenerate: usize,
}

/// `a` beats `b`: a smaller factor, or an equal one at a lexicographically
/// smaller position.
fn better(a: &SweepPoint, b: &SweepPoint) -> bool {
    match a.factor.partial_cmp(&b.factor) {
        Some(std::cmp::Ordering::Equal) => a.key().partial_cmp(&b.key()) == Some(std::cmp::Ordering::Less),
        ord => ord == Some(std::cmp::Ordering::Less),
    }
}

fn check_intensities(intensities: (f64, f64)) -> Result<()> {
    for v in [intensities.0, intensities.1] {
        if !v.is_finite() || v < 0.0 {
            return Err(invalid(format!("intensities must be finite and >= 0, got {v}")));
        }
    }
    Ok(())
}

/// Squeezing factor at a continuous point, `+inf` where the axis is degenerate.
pub fn factor_at(intensities: (f64, f64), axis: &Axis, phi_x: f64, phi_y: f64, kt: f64) -> Result<f64> {
    let beam = InputBeam::from_intensities(intensities.0, intensities.1, phi_x, phi_y)?;
    let m = stokes_moments(&beam, kt)?;
    Ok(factor_of(&m, axis))
}

fn factor_of(m: &StokesMoments, axis: &Axis) -> f64 {
    match squeezing_factor_axis(m, axis) {
        Ok(r) => r.factor,
        Err(_) => f64::INFINITY,
    }
}

/// Compass search from `start` with step halving. Phases wrap, `kt` is
/// clamped to `[0, kt_max]`.
pub fn refine_from(intensities: (f64, f64), axis: &Axis, start: [f64; 3], grid: &SweepGrid) -> Result<SweepPoint> {
    check_intensities(intensities)?;
    grid.validate()?;
    let f = |p: [f64; 3]| factor_at(intensities, axis, p[0], p[1], p[2]).unwrap_or(f64::INFINITY);
    let mut x = [canonical_phase(start[0]), canonical_phase(start[1]), start[2].clamp(0.0, grid.kt_max)];
    let mut fx = f(x);
    let mut h = grid.spacing();
    for _ in 0..grid.refine_iters {
        let mut moved = false;
        'dirs: for d in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut y = x;
                y[d] += sign * h[d];
                y[d] = if d == 2 { y[d].clamp(0.0, grid.kt_max) } else { canonical_phase(y[d]) };
                let fy = f(y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    moved = true;
                    break 'dirs;
                }
            }
        }
        if !moved {
            h.iter_mut().for_each(|v| *v /= 2.0);
            if h.iter().all(|v| *v < 1e-13) {
                break;
            }
        }
    }
    Ok(SweepPoint { phi_x: x[0], phi_y: x[1], kt: x[2], axis: *axis, factor: fx })
}

/// Factor on every grid cell, flattened as `(i * ny + j) * nk + k`.
fn factor_grid(intensities: (f64, f64), axis: &Axis, grid: &SweepGrid) -> Result<Vec<f64>> {
    let (nx, ny, nk) = (grid.phi_x_points, grid.phi_y_points, grid.kt_points);
    let coeffs: Vec<_> = (0..nk).map(|k| heisenberg_coeffs(grid.kt(k))).collect::<Result<_>>()?;
    let (ax, ay) = (intensities.0.sqrt(), intensities.1.sqrt());
    let y_modes: Vec<ModeMoments> =
        (0..ny).map(|j| ModeMoments::coherent(num_complex::Complex64::from_polar(ay, grid.phi_y(j)))).collect();
    let rows: Vec<Vec<f64>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let alpha = num_complex::Complex64::from_polar(ax, grid.phi_x(i));
            let x_modes: Vec<ModeMoments> = coeffs.iter().map(|h| ModeMoments::evolved(alpha, h)).collect();
            let mut row = Vec::with_capacity(ny * nk);
            for y in &y_modes {
                for x in &x_modes {
                    row.push(factor_of(&stokes_moments_from_modes(x, y), axis));
                }
            }
            row
        })
        .collect();
    Ok(rows.concat())
}

fn grid_local_minima(values: &[f64], grid: &SweepGrid) -> Vec<(usize, usize, usize)> {
    let (nx, ny, nk) = (grid.phi_x_points, grid.phi_y_points, grid.kt_points);
    let idx = |i: usize, j: usize, k: usize| (i * ny + j) * nk + k;
    let mut out = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nk {
                let here = idx(i, j, k);
                let v = values[here];
                if !v.is_finite() {
                    continue;
                }
                let mut is_min = true;
                'nb: for di in [nx - 1, 0, 1] {
                    for dj in [ny - 1, 0, 1] {
                        for dk in [-1i64, 0, 1] {
                            if di == 0 && dj == 0 && dk == 0 {
                                continue;
                            }
                            let kk = k as i64 + dk;
                            if kk < 0 || kk >= nk as i64 {
                                continue;
                            }
                            let there = idx((i + di) % nx, (j + dj) % ny, kk as usize);
                            let w = values[there];
                            if w < v || (w == v && there < here) {
                                is_min = false;
                                break 'nb;
                            }
                        }
                    }
                }
                if is_min {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Distance below which two refined minima are the same point.
const MERGE_DIST: f64 = 1e-5;

/// Local and global minima of the factor along `axis` over phases and time.
pub fn minimize_phase_time(intensities: (f64, f64), axis: &Axis, grid: &SweepGrid) -> Result<MinimaReport> {
    check_intensities(intensities)?;
    grid.validate()?;
    let values = factor_grid(intensities, axis, grid)?;
    let degenerate = values.iter().filter(|v| !v.is_finite()).count();
    if degenerate == values.len() {
        return Err(Error::NoValidPoint(format!(
            "the factor along {:?} is undefined on every grid point",
            axis.components()
        )));
    }

    let starts = grid_local_minima(&values, grid);
    let refined: Vec<(bool, SweepPoint)> = starts
        .par_iter()
        .map(|&(i, j, k)| {
            let p = refine_from(intensities, axis, [grid.phi_x(i), grid.phi_y(j), grid.kt(k)], grid)?;
            let on_edge = k == 0 || k + 1 == grid.kt_points || p.kt <= 0.0 || p.kt >= grid.kt_max;
            Ok((on_edge, p))
        })
        .collect::<Result<_>>()?;

    let mut minima: Vec<SweepPoint> = Vec::new();
    let mut global: Option<SweepPoint> = None;
    for (on_edge, p) in refined {
        if global.as_ref().is_none_or(|g| better(&p, g)) {
            global = Some(p);
        }
        if on_edge {
            continue;
        }
        match minima.iter_mut().find(|q| q.distance(&p) < MERGE_DIST) {
            Some(q) if better(&p, q) => *q = p,
            Some(_) => {}
            None => minima.push(p),
        }
    }
    minima.sort_by(|a, b| a.key().partial_cmp(&b.key()).expect("finite coordinates"));
    let global = global.ok_or_else(|| Error::NoValidPoint("no finite local minimum on the grid".into()))?;
    Ok(MinimaReport { minima, global, evaluated: values.len(), degenerate })
}

/// Sphere discretization used by default: a Fibonacci lattice of 256 axes
/// plus the three coordinate axes.
pub fn default_axis_grid() -> Vec<Axis> {
    let mut axes = Axis::fibonacci_lattice(256);
    axes.extend(Axis::COORDINATE);
    axes
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisScanEntry {
    pub kt: f64,
    /// Smallest factor over every candidate axis.
    pub best: SqueezingReport,
    /// Smallest factor over the coordinate axes among the candidates.
    pub best_coordinate: Option<SqueezingReport>,
}

/// Best axis among `axes` for fixed moments; the first of equal factors wins.
pub fn best_axis(moments: &StokesMoments, axes: &[Axis]) -> Option<(SqueezingReport, Option<SqueezingReport>)> {
    let mut best: Option<SqueezingReport> = None;
    let mut best_coord: Option<SqueezingReport> = None;
    for n in axes {
        let Ok(r) = squeezing_factor_axis(moments, n) else { continue };
        if best.is_none_or(|b| r.factor < b.factor) {
            best = Some(r);
        }
        if n.coordinate_index().is_some() && best_coord.is_none_or(|b| r.factor < b.factor) {
            best_coord = Some(r);
        }
    }
    best.map(|b| (b, best_coord))
}

/// For each `kt`, the most squeezed axis among `axes`. Times at which every
/// axis is degenerate are skipped.
pub fn scan_axes(beam: &InputBeam, kt_values: &[f64], axes: &[Axis]) -> Result<Vec<AxisScanEntry>> {
    if axes.is_empty() {
        return Err(invalid("axis grid is empty"));
    }
    kt_values.iter().try_for_each(|&kt| check_kt(kt))?;
    let entries: Vec<Option<AxisScanEntry>> = kt_values
        .par_iter()
        .map(|&kt| {
            let m = stokes_moments(beam, kt)?;
            Ok(best_axis(&m, axes).map(|(best, best_coordinate)| AxisScanEntry { kt, best, best_coordinate }))
        })
        .collect::<Result<_>>()?;
    let entries: Vec<AxisScanEntry> = entries.into_iter().flatten().collect();
    if entries.is_empty() {
        return Err(Error::NoValidPoint("every axis is degenerate at every kt".into()));
    }
    Ok(entries)
}

/// `steps` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(invalid(format!("a range needs at least 2 steps, got {steps}")));
    }
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(invalid(format!("invalid range [{start}, {stop}]")));
    }
    Ok((0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect())
}

/// `(i, j)` position in a [`RegionMap`].
pub type CellIndex = (usize, usize);

/// Phase-locked minimum over the `(|alpha|^2, |beta|^2)` plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub alpha_sq: Vec<f64>,
    pub beta_sq: Vec<f64>,
    /// `s2_min[i][j]` at `(alpha_sq[i], beta_sq[j])`.
    pub s2_min: Vec<Vec<f64>>,
    /// `s2_min < 1`.
    pub squeezed: Vec<Vec<bool>>,
}

impl RegionMap {
    /// Cells whose squeezed flag disagrees with `|beta|^4 > 4|alpha|^2`,
    /// split into those within one cell of the boundary curve and the rest.
    pub fn condition_mismatches(&self) -> (Vec<CellIndex>, Vec<CellIndex>) {
        let (mut near, mut far) = (Vec::new(), Vec::new());
        let side = |a: f64, b: f64| b * b > 4.0 * a;
        for (i, &a) in self.alpha_sq.iter().enumerate() {
            for (j, &b) in self.beta_sq.iter().enumerate() {
                if self.squeezed[i][j] == side(a, b) {
                    continue;
                }
                let neighbours = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                let at_boundary = neighbours.iter().any(|&(p, q)| match (self.alpha_sq.get(p), self.beta_sq.get(q)) {
                    (Some(&a2), Some(&b2)) => side(a2, b2) != side(a, b),
                    _ => false,
                });
                if at_boundary {
                    near.push((i, j));
                } else {
                    far.push((i, j));
                }
            }
        }
        (near, far)
    }

    /// Adjacent pairs that break "decreasing in `|beta|^2`, increasing in `|alpha|^2`".
    pub fn monotonicity_violations(&self) -> usize {
        let (na, nb) = (self.alpha_sq.len(), self.beta_sq.len());
        let mut bad = 0;
        for i in 0..na {
            for j in 0..nb {
                let v = self.s2_min[i][j];
                if j + 1 < nb && self.s2_min[i][j + 1] > v {
                    bad += 1;
                }
                if i + 1 < na && self.s2_min[i + 1][j] < v {
                    bad += 1;
                }
            }
        }
        bad
    }
}

pub fn region_map(alpha_sq_range: (f64, f64), beta_sq_range: (f64, f64), resolution: usize) -> Result<RegionMap> {
    if resolution < 16 {
        return Err(invalid(format!("resolution must be at least 16, got {resolution}")));
    }
    for (lo, hi) in [alpha_sq_range, beta_sq_range] {
        if !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(invalid(format!("invalid intensity range [{lo}, {hi}]")));
        }
    }
    let alpha_sq = linspace(alpha_sq_range.0, alpha_sq_range.1, resolution)?;
    let beta_sq = linspace(beta_sq_range.0, beta_sq_range.1, resolution)?;
    let s2_min: Vec<Vec<f64>> =
        alpha_sq.iter().map(|&a| beta_sq.iter().map(|&b| minimum_for(a, b).s2_min).collect()).collect();
    let squeezed = s2_min.iter().map(|row| row.iter().map(|&v| v < 1.0).collect()).collect();
    Ok(RegionMap { alpha_sq, beta_sq, s2_min, squeezed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn small_grid() -> SweepGrid {
        SweepGrid { phi_x_points: 16, phi_y_points: 16, kt_points: 24, kt_max: 1.5, refine_iters: 500 }
    }

    #[test]
    fn rejects_coarse_grid() {
        let g = SweepGrid { phi_x_points: 4, ..SweepGrid::default() };
        assert!(g.validate().is_err());
        assert!(SweepGrid { kt_max: 0.0, ..SweepGrid::default() }.validate().is_err());
    }

    #[test]
    fn vacuum_has_no_valid_point_at_zero_time() {
        let g = SweepGrid { kt_max: 1e-300, ..small_grid() };
        let r = minimize_phase_time((0.0, 0.0), &Axis::S2, &g);
        assert!(matches!(r, Err(Error::NoValidPoint(_))), "{r:?}");
    }

    #[test]
    fn y_only_beam_reaches_closed_form() {
        let r = minimize_phase_time((0.0, 9.0), &Axis::S2, &small_grid()).unwrap();
        assert!((r.global.factor - 1.0 / 10f64.sqrt()).abs() < 1e-4);
        let d = phase_distance(r.global.phi_y, FRAC_PI_4).min(phase_distance(r.global.phi_y, 5.0 * FRAC_PI_4));
        assert!(d < 1e-3, "phi_y = {}", r.global.phi_y);
    }

    #[test]
    fn weak_y_beam_squeezes_only_off_lock() {
        let g = small_grid();
        let r = minimize_phase_time((10.0, 2.0), &Axis::S2, &g).unwrap();
        assert!(r.global.factor < 1.0);
        for (px, py) in crate::beam::PHASE_LOCKED_POINTS {
            for k in 0..g.kt_points {
                assert!(factor_at((10.0, 2.0), &Axis::S2, px, py, g.kt(k)).unwrap() >= 1.0);
            }
        }
    }

    #[test]
    fn equal_beams_have_four_interior_minima() {
        let g = SweepGrid { phi_x_points: 32, phi_y_points: 32, kt_points: 48, ..SweepGrid::default() };
        let r = minimize_phase_time((10.0, 10.0), &Axis::S2, &g).unwrap();
        assert_eq!(r.minima.len(), 4, "{:?}", r.minima);
        let closed = minimum_for(10.0, 10.0).s2_min;
        for m in &r.minima {
            assert!(m.factor < closed && closed - m.factor < 2e-3);
        }
    }

    #[test]
    fn refinement_is_stable_under_perturbation() {
        let g = small_grid();
        let r = minimize_phase_time((10.0, 10.0), &Axis::S2, &g).unwrap();
        let h = g.spacing();
        for m in &r.minima {
            for (sx, sy, sk) in [(0.6, -0.4, 0.5), (-0.7, 0.3, -0.6)] {
                let start = [m.phi_x + sx * h[0], m.phi_y + sy * h[1], m.kt + sk * h[2]];
                let p = refine_from((10.0, 10.0), &Axis::S2, start, &g).unwrap();
                assert!(p.distance(m) < 1e-6, "{} from {:?}", p.distance(m), m);
            }
        }
    }

    #[test]
    fn global_is_best() {
        let r = minimize_phase_time((3.0, 6.0), &Axis::S2, &small_grid()).unwrap();
        assert!(r.minima.iter().all(|m| r.global.factor <= m.factor));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 1.5, 4).unwrap();
        assert_eq!(v, vec![0.0, 0.5, 1.0, 1.5]);
        assert!(linspace(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn coherent_beam_has_no_squeezed_axis() {
        let beam = InputBeam::from_intensities(2.0, 3.0, 0.3, 1.0).unwrap();
        let e = scan_axes(&beam, &[0.0], &default_axis_grid()).unwrap();
        assert!(e[0].best.factor >= 1.0 - 1e-12);
    }

    #[test]
    fn free_axis_beats_coordinate_axes() {
        let beam = InputBeam::phase_locked(4.0, 7.0).unwrap();
        let kts = linspace(0.0, 0.6, 7).unwrap();
        for e in scan_axes(&beam, &kts, &default_axis_grid()).unwrap() {
            assert!(e.best.factor <= e.best_coordinate.unwrap().factor);
        }
    }

    #[test]
    fn region_map_cells() {
        let m = region_map((0.0, 10.0), (0.0, 9.0), 16).unwrap();
        assert!((m.s2_min[0][15] - 1.0 / 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(m.monotonicity_violations(), 0);
        assert!(m.condition_mismatches().1.is_empty());
        assert!(region_map((0.0, 1.0), (0.0, 1.0), 8).is_err());
        assert!(region_map((1.0, 1.0), (0.0, 1.0), 16).is_err());
    }
}
