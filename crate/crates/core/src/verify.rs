//! Engine-versus-oracle arbitration.
//!
//! [`run_verification`] evaluates the analytic engine and the Fock-space
//! oracle on a parameter grid, checks operator identities and uncertainty
//! relations, and builds a ledger that places each published closed form
//! next to the oracle.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::factor::squeezing_factor_axis;
use crate::analytic::kernel::stokes_moments;
use crate::analytic::phase_locked::{minimum_for, s2_min_at_partition, s2_of_growth, window_for, zero_crossings_for};
use crate::analytic::printed;
use crate::axis::Axis;
use crate::beam::InputBeam;
use crate::error::{Error, Result};
use crate::moments::StokesMoments;
use crate::oracle::fock::{build_coherent, coherent_min_dim};
use crate::oracle::moments::{evolve_coherent, full_two_mode_moments, product_moments, stokes_moments_product};
use crate::oracle::truncation::{converged_moments, evolved_dim_hint, truncation_check_batch, TruncationPolicy};
use crate::sweep::{minimize_phase_time, refine_from, SweepGrid};

/// Values of `|alpha|^2`, `|beta|^2`, phases and `kt` on the verification grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardGrid {
    pub intensities: Vec<f64>,
    pub phases: Vec<f64>,
    pub kts: Vec<f64>,
}

impl Default for StandardGrid {
    fn default() -> Self {
        Self {
            intensities: vec![0.0, 0.25, 1.0, 4.0, 9.0, 10.0],
            phases: vec![0.0, FRAC_PI_4, FRAC_PI_2, 5.0 * FRAC_PI_4],
            kts: vec![0.0, 0.05, 0.1, 0.25, 0.5, 0.8],
        }
    }
}

impl StandardGrid {
    pub fn cells(&self) -> usize {
        (self.intensities.len() * self.phases.len()).pow(2) * self.kts.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub grid: StandardGrid,
    pub policy: TruncationPolicy,
    /// Relative tolerance for engine-versus-oracle agreement.
    pub tolerance: f64,
    /// Truncation of the joint two-mode check.
    pub two_mode_dim: usize,
    /// Include the published-formula ledger.
    pub ledger: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: StandardGrid::default(),
            policy: TruncationPolicy::default(),
            tolerance: 1e-8,
            two_mode_dim: 48,
            ledger: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub intensity_x: f64,
    pub intensity_y: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub kt: f64,
}

impl Cell {
    pub fn beam(&self) -> Result<InputBeam> {
        InputBeam::from_intensities(self.intensity_x, self.intensity_y, self.phi_x, self.phi_y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityDeviation {
    pub quantity: String,
    pub max_relative: f64,
    pub at: Option<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonConvergedCell {
    pub cell: Cell,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl InvariantCheck {
    fn below(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value < tolerance }
    }
}

/// One published expression set against the engine and the oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub id: String,
    pub quantity: String,
    pub parameters: String,
    /// Value of the published expression, when the claim is numeric.
    pub printed: Option<f64>,
    pub engine: f64,
    /// `None` when the oracle did not converge.
    pub oracle: Option<f64>,
    /// The published expression or claim survives the oracle comparison.
    pub printed_holds: bool,
    pub engine_matches_oracle: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub cells: usize,
    pub converged_cells: usize,
    pub non_converged: Vec<NonConvergedCell>,
    pub max_dim_used: usize,
    pub deviations: Vec<QuantityDeviation>,
    pub invariants: Vec<InvariantCheck>,
    pub ledger: Vec<LedgerEntry>,
    pub passed: bool,
}

const QUANTITIES: [&str; 11] =
    ["S0 mean", "S0^2 mean", "S1 mean", "S2 mean", "S3 mean", "V1", "V2", "V3", "cov12", "cov13", "cov23"];

fn quantities(m: &StokesMoments) -> [f64; 11] {
    [
        m.mean0,
        m.mean0_sq,
        m.mean[0],
        m.mean[1],
        m.mean[2],
        m.cov[0][0],
        m.cov[1][1],
        m.cov[2][2],
        m.cov[0][1],
        m.cov[0][2],
        m.cov[1][2],
    ]
}

fn relative(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

/// Largest relative shortfall of `V_j V_k` below `<S_l>^2`, zero when every
/// relation holds.
pub fn uncertainty_shortfall(m: &StokesMoments) -> f64 {
    let v = m.variances();
    [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .into_iter()
        .map(|(j, k, l)| {
            let bound = m.mean[l] * m.mean[l];
            if bound > 0.0 {
                ((bound - v[j] * v[k]) / bound).max(0.0)
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

/// `|<S1^2 + S2^2 + S3^2> - <S0^2> - 2<S0>|`, relative to `max(1, <S0^2>)`.
pub fn casimir_defect(m: &StokesMoments) -> f64 {
    let rhs = m.mean0_sq + 2.0 * m.mean0;
    (m.stokes_square_sum() - rhs).abs() / rhs.abs().max(1.0)
}

/// Engine and oracle moments of a cell, or why the oracle failed there.
type CellMoments = std::result::Result<(StokesMoments, StokesMoments), String>;

struct GridOutcome {
    cells: Vec<(Cell, CellMoments)>,
    max_dim: usize,
}

/// Every cell of the grid. The x-mode evolution depends only on
/// `(|alpha|^2, phi_x, kt)`, so each such key is converged once, jointly with
/// all its y-mode partners.
fn evaluate_grid(config: &VerifyConfig) -> Result<GridOutcome> {
    let g = &config.grid;
    let mut ys = Vec::new();
    for &b in &g.intensities {
        for &py in &g.phases {
            let beta = C64::from_polar(b.sqrt(), py);
            let y = build_coherent(beta, coherent_min_dim(b))?;
            ys.push((b, py, y));
        }
    }
    let mut keys = Vec::new();
    for &a in &g.intensities {
        for &px in &g.phases {
            for &kt in &g.kts {
                keys.push((a, px, kt));
            }
        }
    }
    let results: Vec<(Vec<_>, usize)> = keys
        .par_iter()
        .map(|&(a, px, kt)| {
            let alpha = C64::from_polar(a.sqrt(), px);
            let batch = truncation_check_batch(
                |d| {
                    let x = evolve_coherent(alpha, kt, d)?;
                    Ok(ys.iter().map(|(_, _, y)| product_moments(x.amplitudes(), y.amplitudes())).collect())
                },
                evolved_dim_hint(a, kt),
                &config.policy,
            );
            let mut out = Vec::with_capacity(ys.len());
            let mut dim = 0;
            for (i, (b, py, _)) in ys.iter().enumerate() {
                let cell = Cell { intensity_x: a, intensity_y: *b, phi_x: px, phi_y: *py, kt };
                let entry = match &batch {
                    Ok(r) => {
                        dim = r.final_dim;
                        cell.beam()
                            .and_then(|beam| stokes_moments(&beam, kt))
                            .map(|e| (e, r.moments[i]))
                            .map_err(|e| e.to_string())
                    }
                    Err(e) => Err(e.to_string()),
                };
                out.push((cell, entry));
            }
            (out, dim)
        })
        .collect();
    let max_dim = results.iter().map(|r| r.1).max().unwrap_or(0);
    Ok(GridOutcome { cells: results.into_iter().flat_map(|r| r.0).collect(), max_dim })
}

struct TwoModeSummary {
    path_deviation: f64,
    commutator: f64,
    casimir: f64,
}

/// Joint-space check on the low-intensity, short-time corner of the grid.
fn two_mode_checks(config: &VerifyConfig) -> Result<TwoModeSummary> {
    let g = &config.grid;
    let small: Vec<f64> = g.intensities.iter().copied().filter(|&v| v <= 1.0).collect();
    let kts: Vec<f64> = g.kts.iter().copied().filter(|&v| v <= 0.25).collect();
    let mut cells = Vec::new();
    for &a in &small {
        for &b in &small {
            for &px in &g.phases {
                for &py in &g.phases {
                    for &kt in &kts {
                        cells.push(Cell { intensity_x: a, intensity_y: b, phi_x: px, phi_y: py, kt });
                    }
                }
            }
        }
    }
    let dim = config.two_mode_dim;
    let rows: Vec<(f64, f64, f64)> = cells
        .par_iter()
        .map(|c| {
            let beam = c.beam()?;
            let r = full_two_mode_moments(&beam, c.kt, dim)?;
            let x = evolve_coherent(beam.alpha, c.kt, dim)?;
            let p = stokes_moments_product(&x, beam.beta)?;
            let scale = 1.0 + r.moments.mean0;
            Ok((r.moments.max_relative_deviation(&p), r.commutator_defect / scale, casimir_defect(&r.moments)))
        })
        .collect::<Result<_>>()?;
    let worst = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(TwoModeSummary { path_deviation: worst(|r| r.0), commutator: worst(|r| r.1), casimir: worst(|r| r.2) })
}

pub fn run_verification(config: &VerifyConfig) -> Result<VerifyReport> {
    config.policy.validate()?;
    let outcome = evaluate_grid(config)?;

    let mut deviations: Vec<QuantityDeviation> =
        QUANTITIES.iter().map(|q| QuantityDeviation { quantity: (*q).into(), max_relative: 0.0, at: None }).collect();
    let mut non_converged = Vec::new();
    let (mut oracle_unc, mut engine_unc, mut casimir) = (0.0f64, 0.0f64, 0.0f64);
    for (cell, entry) in &outcome.cells {
        match entry {
            Ok((engine, oracle)) => {
                let floor = 1.0 + engine.mean0.abs().max(oracle.mean0.abs());
                for (d, (e, o)) in deviations.iter_mut().zip(quantities(engine).iter().zip(quantities(oracle))) {
                    let r = relative(*e, o, floor);
                    if r > d.max_relative || d.at.is_none() {
                        d.max_relative = d.max_relative.max(r);
                        d.at = Some(*cell);
                    }
                }
                oracle_unc = oracle_unc.max(uncertainty_shortfall(oracle));
                engine_unc = engine_unc.max(uncertainty_shortfall(engine));
                casimir = casimir.max(casimir_defect(oracle));
            }
            Err(msg) => non_converged.push(NonConvergedCell { cell: *cell, message: msg.clone() }),
        }
    }
    let worst_dev = deviations.iter().map(|d| d.max_relative).fold(0.0, f64::max);
    let two_mode = two_mode_checks(config)?;
    let ledger = if config.ledger { deviation_ledger(&config.policy, config.tolerance) } else { Vec::new() };
    let ledger_mismatch = ledger.iter().filter(|e| !e.engine_matches_oracle).count();

    let cells = outcome.cells.len();
    let invariants = vec![
        InvariantCheck::below("engine vs oracle moments", worst_dev, config.tolerance),
        InvariantCheck::below("non-converged cells", non_converged.len() as f64, 0.5),
        InvariantCheck::below("uncertainty relations (oracle)", oracle_unc, 1e-9),
        InvariantCheck::below("uncertainty relations (engine)", engine_unc, 1e-9),
        InvariantCheck::below("S1^2+S2^2+S3^2 = S0^2+2S0 (oracle)", casimir, 1e-8),
        InvariantCheck::below("two-mode vs product path", two_mode.path_deviation, 1e-9),
        InvariantCheck::below("commutators (two-mode)", two_mode.commutator, 1e-8),
        InvariantCheck::below("S1^2+S2^2+S3^2 = S0^2+2S0 (two-mode)", two_mode.casimir, 1e-8),
        InvariantCheck::below("ledger entries where engine and oracle differ", ledger_mismatch as f64, 0.5),
    ];
    let passed = invariants.iter().all(|c| c.passed);
    Ok(VerifyReport {
        cells,
        converged_cells: cells - non_converged.len(),
        non_converged,
        max_dim_used: outcome.max_dim,
        deviations,
        invariants,
        ledger,
        passed,
    })
}

fn oracle_moments(beam: &InputBeam, kt: f64, policy: &TruncationPolicy) -> Result<StokesMoments> {
    Ok(converged_moments(beam, kt, policy)?.moments)
}

fn oracle_factor(beam: &InputBeam, kt: f64, policy: &TruncationPolicy) -> Result<f64> {
    let m = oracle_moments(beam, kt, policy)?;
    match squeezing_factor_axis(&m, &Axis::S2) {
        Ok(r) => Ok(r.factor),
        Err(Error::DegenerateAxis(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Root of `f` in `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in sign.
fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = f(lo)?;
    if flo.signum() == f(hi)?.signum() {
        return Err(Error::NoValidPoint(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid)?.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Minimum of a unimodal `f` on `[lo, hi]` by golden-section search.
fn golden(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-9 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}

struct LedgerBuilder {
    tolerance: f64,
    entries: Vec<LedgerEntry>,
}

impl LedgerBuilder {
    fn close(&self, a: f64, b: f64) -> bool {
        a == b || (a - b).abs() <= self.tolerance * a.abs().max(b.abs()).max(1.0)
    }

    /// Numeric entry: the published value holds when it matches the oracle.
    fn numeric(&mut self, id: &str, quantity: &str, parameters: &str, printed: f64, engine: f64, oracle: Result<f64>) {
        let oracle = oracle.ok();
        let holds = oracle.is_some_and(|o| self.close(printed, o));
        self.push(id, quantity, parameters, Some(printed), engine, oracle, holds, String::new());
    }

    /// Qualitative claim judged by `holds` on the oracle value.
    #[allow(clippy::too_many_arguments)]
    fn claim(
        &mut self,
        id: &str,
        quantity: &str,
        parameters: &str,
        printed: Option<f64>,
        engine: f64,
        oracle: Result<f64>,
        holds: impl Fn(f64) -> bool,
        note: &str,
    ) {
        let oracle = oracle.ok();
        let h = oracle.is_some_and(holds);
        self.push(id, quantity, parameters, printed, engine, oracle, h, note.into());
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: &str,
        quantity: &str,
        parameters: &str,
        printed: Option<f64>,
        engine: f64,
        oracle: Option<f64>,
        printed_holds: bool,
        note: String,
    ) {
        let engine_matches_oracle = oracle.is_some_and(|o| self.close(engine, o));
        self.entries.push(LedgerEntry {
            id: id.into(),
            quantity: quantity.into(),
            parameters: parameters.into(),
            printed,
            engine,
            oracle,
            printed_holds,
            engine_matches_oracle,
            note,
        });
    }
}

fn locked(a: f64, b: f64) -> InputBeam {
    InputBeam::phase_locked(a, b).expect("valid intensities")
}

/// Published closed forms and claims, each with the engine value and the
/// oracle value at the same parameters.
pub fn deviation_ledger(policy: &TruncationPolicy, tolerance: f64) -> Vec<LedgerEntry> {
    let mut l = LedgerBuilder { tolerance, entries: Vec::new() };
    let engine = |beam: &InputBeam, kt: f64| stokes_moments(beam, kt).expect("valid point");
    let engine_factor = |beam: &InputBeam, kt: f64| {
        squeezing_factor_axis(&engine(beam, kt), &Axis::S2).map_or(f64::INFINITY, |r| r.factor)
    };

    // Mean and variances of the general beam.
    let (beam, kt) = (locked(10.0, 8.0), 0.5);
    let params = "|alpha|^2=10, |beta|^2=8, phases pi/4, kt=0.5";
    let (e, o) = (engine(&beam, kt), oracle_moments(&beam, kt, policy));
    let p_means = printed::printed_means(&beam, kt).expect("valid point");
    let p_vars = printed::printed_variances(&beam, kt).expect("valid point");
    l.numeric(
        "s1-mean-vacuum-term",
        "<S1> without the s^2 vacuum term",
        params,
        p_means[0],
        e.mean[0],
        o.clone().map(|m| m.mean[0]),
    );
    l.numeric("v1-closed-form", "V1", params, p_vars[0], e.cov[0][0], o.clone().map(|m| m.cov[0][0]));
    l.numeric(
        "x-without-vacuum-term",
        "X = (c-s)^2|alpha|^2 - |beta|^2",
        params,
        printed::printed_x(10.0, 8.0, kt).expect("valid kt"),
        e.mean[0],
        o.clone().map(|m| m.mean[0]),
    );
    l.numeric(
        "s2-variance-literal-reading",
        "Y = (c-s)^2|alpha|^2 + |beta|^2 + s^2",
        params,
        printed::literal_y_reading(10.0, 8.0, kt).expect("valid kt"),
        e.cov[1][1],
        o.clone().map(|m| m.cov[1][1]),
    );
    l.numeric(
        "s2-variance-grouped-reading",
        "Y = (c-s)^2(|alpha|^2 + |beta|^2) + s^2",
        params,
        printed::grouped_y_reading(10.0, 8.0, kt).expect("valid kt"),
        e.cov[1][1],
        o.map(|m| m.cov[1][1]),
    );

    let beam3 = InputBeam::from_intensities(4.0, 9.0, 0.3, FRAC_PI_4).expect("valid beam");
    let kt3 = 0.25;
    let e3 = engine(&beam3, kt3);
    l.numeric(
        "v3-equals-v2",
        "V3, published equal to V2",
        "|alpha|^2=4, |beta|^2=9, phi_x=0.3, phi_y=pi/4, kt=0.25",
        printed::printed_variances(&beam3, kt3).expect("valid point")[2],
        e3.cov[2][2],
        oracle_moments(&beam3, kt3, policy).map(|m| m.cov[2][2]),
    );

    let growth = 0.5f64 * 4.0;
    l.numeric(
        "growth-variable-form",
        "S2 factor in the variable x = e^{4kt} - 1",
        params,
        printed::printed_growth_form(10.0, 8.0, growth.exp_m1()).unwrap_or(f64::NAN),
        s2_of_growth(10.0, 8.0, growth.exp_m1()),
        oracle_factor(&beam, kt, policy),
    );

    // Window edges: oracle roots of S2 = 1.
    let w = window_for(10.0, 8.0).expect("window exists");
    let zc = zero_crossings_for(10.0, 8.0).expect("crossings exist");
    let pw = printed::printed_window(10.0, 8.0).expect("printed window exists");
    let f1 = |t: f64| oracle_factor(&beam, t, policy).map(|f| f - 1.0);
    let mid = 0.5 * (w.t1 + w.t2);
    l.numeric(
        "window-lower-edge",
        "t1, lower edge of the squeezing window",
        "|alpha|^2=10, |beta|^2=8",
        pw.0,
        w.t1,
        bisect(f1, 0.5 * (zc.t01 + w.t1), mid),
    );
    l.numeric(
        "window-upper-edge",
        "t2, upper edge of the squeezing window",
        "|alpha|^2=10, |beta|^2=8",
        pw.1,
        w.t2,
        bisect(f1, mid, 0.5 * (w.t2 + zc.t02)),
    );

    // Second zero crossing of X for equal intensities.
    let beam9 = locked(9.0, 9.0);
    let t02 = zero_crossings_for(9.0, 9.0).expect("crossings exist").t02;
    l.numeric(
        "equal-intensity-t02",
        "t02, second zero of X at |alpha|^2 = |beta|^2",
        "|alpha|^2=|beta|^2=9",
        printed::printed_equal_t02(9.0),
        t02,
        bisect(|t| oracle_moments(&beam9, t, policy).map(|m| m.mean[0]), t02 - 0.05, t02 + 0.05),
    );

    // Optimum over the partition angle at fixed N.
    let n = 9.0;
    let beam_y = locked(0.0, n);
    let oracle_min = |b: &InputBeam| golden(|t| oracle_factor(b, t, policy), 0.05, 0.9).map(|r| r.1);
    l.numeric(
        "partition-optimum",
        "optimal S2 minimum at fixed N, published 1/sqrt(1+N^2)",
        "N=9, all photons in the y mode",
        printed::printed_optimum(n),
        minimum_for(0.0, n).s2_min,
        oracle_min(&beam_y),
    );
    let chi = FRAC_PI_3;
    let (a_chi, b_chi) = (n * chi.cos().powi(2), n * chi.sin().powi(2));
    l.numeric(
        "partition-minimum",
        "S2 minimum at fixed N and partition angle",
        "N=9, chi=pi/3",
        printed::printed_partition_minimum(n, chi),
        s2_min_at_partition(n, chi).expect("valid partition").s2_min,
        oracle_min(&locked(a_chi, b_chi)),
    );

    // Equal intensity claimed best among the three default splits.
    let splits = [(10.0, 8.0), (9.0, 9.0), (8.0, 10.0)];
    let engine_best = splits.iter().map(|&(a, b)| minimum_for(a, b).s2_min).fold(f64::INFINITY, f64::min);
    let oracle_best: Result<Vec<f64>> =
        splits.iter().map(|&(a, b)| oracle_factor(&locked(a, b), minimum_for(a, b).kt_min, policy)).collect();
    let equal = minimum_for(9.0, 9.0).s2_min;
    l.claim(
        "equal-intensity-best",
        "lowest S2 minimum among the splits (10,8), (9,9), (8,10)",
        "phase-locked beams, N=18",
        Some(equal),
        engine_best,
        oracle_best.map(|v| v.into_iter().fold(f64::INFINITY, f64::min)),
        |best| (best - equal).abs() <= tolerance * equal,
        "published claim: equal intensities squeeze most; at fixed N the split with more light in y wins",
    );

    // Direction of the squeezing boundary |beta|^2 = 2|alpha|.
    let (a_b, b_b) = (4.0, 6.0);
    let mb = minimum_for(a_b, b_b);
    l.claim(
        "boundary-direction",
        "S2 minimum on the side |beta|^2 > 2|alpha|",
        "|alpha|^2=4, |beta|^2=6",
        Some(1.0),
        mb.s2_min,
        oracle_factor(&locked(a_b, b_b), mb.kt_min, policy),
        |v| v > 1.0,
        "published claim: S2 minimum above 1 for |beta|^2 > 2|alpha|; that side is the squeezed one",
    );

    // Phase-locked points as exact minima over the phases.
    let grid = SweepGrid::default();
    let m10 = minimum_for(10.0, 10.0);
    let refined = refine_from((10.0, 10.0), &Axis::S2, [FRAC_PI_4, FRAC_PI_4, m10.kt_min], &grid).expect("valid start");
    let off = InputBeam::from_intensities(10.0, 10.0, refined.phi_x, refined.phi_y).expect("valid beam");
    l.claim(
        "phase-locked-minimum",
        "S2 minimum over phases and time",
        &format!(
            "|alpha|^2=|beta|^2=10, refined at phi_x={:.6}, phi_y={:.6}, kt={:.6}",
            refined.phi_x, refined.phi_y, refined.kt
        ),
        Some(m10.s2_min),
        refined.factor,
        oracle_factor(&off, refined.kt, policy),
        |v| v >= m10.s2_min - tolerance,
        "published: minima at the phase-locked points; a nearby unlocked point is lower",
    );

    // No squeezing when |beta|^4 < 4|alpha|^2.
    let coarse = SweepGrid { phi_x_points: 16, phi_y_points: 16, kt_points: 24, ..SweepGrid::default() };
    if let Ok(r) = minimize_phase_time((10.0, 2.0), &Axis::S2, &coarse) {
        let g = r.global;
        let b = InputBeam::from_intensities(10.0, 2.0, g.phi_x, g.phi_y).expect("valid beam");
        l.claim(
            "weak-beam-no-squeezing",
            "S2 minimum over phases and time",
            &format!("|alpha|^2=10, |beta|^2=2, at phi_x={:.6}, phi_y={:.6}, kt={:.6}", g.phi_x, g.phi_y, g.kt),
            None,
            engine_factor(&b, g.kt),
            oracle_factor(&b, g.kt, policy),
            |v| v >= 1.0,
            "published: no squeezing when |beta|^4 < 4|alpha|^2; holds at the phase-locked points only",
        );
    }
    l.entries
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> VerifyConfig {
        VerifyConfig {
            grid: StandardGrid { intensities: vec![0.0, 1.0, 4.0], phases: vec![0.0, FRAC_PI_4], kts: vec![0.0, 0.25] },
            ledger: false,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn small_grid_passes() {
        let r = run_verification(&small_config()).unwrap();
        assert_eq!(r.cells, 72);
        assert!(r.passed, "{:?}", r.invariants);
    }

    #[test]
    fn tiny_ceiling_flags_cells() {
        let mut c = small_config();
        c.grid.kts = vec![0.8];
        c.policy.max_dim = 32;
        let r = run_verification(&c).unwrap();
        assert!(!r.passed);
        assert!(!r.non_converged.is_empty());
    }

    #[test]
    fn shortfall_and_casimir_of_coherent_state() {
        let m = stokes_moments(&InputBeam::from_intensities(2.0, 3.0, 0.1, 0.2).unwrap(), 0.0).unwrap();
        assert!(uncertainty_shortfall(&m) < 1e-12);
        assert!(casimir_defect(&m) < 1e-12);
    }

    #[test]
    fn root_finders() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        let (x, fx) = golden(|x| Ok((x - 0.3).powi(2) + 1.0), 0.0, 1.0).unwrap();
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-14);
        assert!(bisect(|x| Ok(x + 1.0), 0.0, 1.0).is_err());
    }
}
