//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::sync::Mutex;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use stokes_squeeze::analytic::{minimum_for, window_report};
use stokes_squeeze::beam::PHASE_LOCKED_POINTS;
use stokes_squeeze::oracle::propagator::{annihilation_matrix, edge_margin};
use stokes_squeeze::oracle::{converged_moments, full_two_mode_moments, squeeze_propagator, TruncationPolicy};
use stokes_squeeze::sweep::{minimize_phase_time, region_map, SweepGrid};
use stokes_squeeze::verify::{deviation_ledger, run_verification, uncertainty_shortfall, VerifyConfig};
use stokes_squeeze::{squeezing_factor_axis, stokes_moments, Axis, InputBeam, StokesMoments};

static SHORTFALL: Mutex<(f64, usize)> = Mutex::new((0.0, 0));

fn record(m: &StokesMoments) {
    let mut g = SHORTFALL.lock().unwrap();
    g.0 = g.0.max(uncertainty_shortfall(m));
    g.1 += 1;
}

fn record_value(shortfall: f64, count: usize) {
    let mut g = SHORTFALL.lock().unwrap();
    g.0 = g.0.max(shortfall);
    g.1 += count;
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// S2 factor through the general moments path.
fn s2_factor(beam: &InputBeam, kt: f64) -> f64 {
    let m = stokes_moments(beam, kt).unwrap();
    record(&m);
    squeezing_factor_axis(&m, &Axis::S2).map_or(f64::INFINITY, |r| r.factor)
}

fn oracle_equivalence() -> Outcome {
    let config = VerifyConfig { ledger: false, ..VerifyConfig::default() };
    let start = Instant::now();
    let r = run_verification(&config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = r.deviations.iter().map(|d| d.max_relative).fold(0.0, f64::max);
    let unc = r.invariants.iter().filter(|c| c.name.starts_with("uncertainty")).map(|c| c.value).fold(0.0, f64::max);
    record_value(unc, 2 * r.converged_cells);
    let passed = r.cells >= 500 && r.non_converged.is_empty() && worst < 1e-8 && elapsed < 60.0;
    outcome(
        passed,
        format!(
            "{} cells, {} converged, max relative deviation {worst:.2e} (< 1e-8), max dim {}, {elapsed:.1} s (< 60 s)",
            r.cells, r.converged_cells, r.max_dim_used
        ),
    )
}

fn max_abs_block(m: &DMatrix<C64>, block: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

fn heisenberg_fidelity() -> Outcome {
    let dim = 128;
    let block = dim - edge_margin(dim);
    let a = annihilation_matrix(dim);
    let mut passed = true;
    let mut parts = Vec::new();
    for kt in [0.1, 0.4, 0.8] {
        let u = squeeze_propagator(kt, dim).unwrap();
        let (c, s) = ((2.0 * kt).cosh(), (2.0 * kt).sinh());
        let diff = u.adjoint() * &a * &u - (a.map(|x| x * c) - a.adjoint().map(|x| x * C64::new(0.0, s)));
        let err = max_abs_block(&diff, block);
        let largest = (1..=dim).rev().find(|&b| max_abs_block(&diff, b) < 1e-9).unwrap_or(0);
        passed &= err < 1e-9;
        parts.push(format!("kt={kt}: {err:.2e} on block {block}, passes up to block {largest}"));
    }
    outcome(passed, format!("dim {dim}, tolerance 1e-9; {}", parts.join("; ")))
}

fn coherent_baseline() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20240501);
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let policy = TruncationPolicy::default();
    for _ in 0..100 {
        let beam = InputBeam::from_intensities(
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        )
        .unwrap();
        let n = beam.total();
        let m = stokes_moments(&beam, 0.0).unwrap();
        record(&m);
        let o = converged_moments(&beam, 0.0, &policy).unwrap().moments;
        record(&o);
        for v in m.variances().into_iter().chain([m.mean0]) {
            worst = worst.max((v - n).abs() / n.max(1.0));
        }
        for v in o.variances() {
            worst_oracle = worst_oracle.max((v - n).abs() / n.max(1.0));
        }
    }
    outcome(
        worst <= 1e-12 && worst_oracle <= 1e-10,
        format!(
            "100 seeded beams: engine max |V_j - N| / N {worst:.2e} (<= 1e-12), oracle {worst_oracle:.2e} (<= 1e-10)"
        ),
    )
}

fn window_correctness() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (a, b) in [(10.0, 8.0), (0.0, 9.0), (9.0, 9.0), (10.0, 10.0)] {
        let beam = InputBeam::phase_locked(a, b).unwrap();
        let w = window_report(&beam).unwrap();
        let (Some(t1), Some(t2)) = (w.t1, w.t2) else {
            passed = false;
            parts.push(format!("({a},{b}): no window"));
            continue;
        };
        let edge = (s2_factor(&beam, t1) - 1.0).abs().max((s2_factor(&beam, t2) - 1.0).abs());
        let inside = (0..200).all(|i| s2_factor(&beam, t1 + (t2 - t1) * (i as f64 + 0.5) / 200.0) < 1.0);
        let ordered = w.is_ordered();
        let ok = edge <= 1e-9 && inside && ordered;
        passed &= ok;
        parts.push(format!("({a},{b}): edge {edge:.1e}, inside {inside}, ordered {ordered}"));
    }
    outcome(passed, parts.join("; "))
}

/// Numerical minimum of the S2 factor over `kt` on `[0, 1.5]`: dense scan,
/// then bisection on the sign of a central difference.
fn numeric_minimum(beam: &InputBeam) -> (f64, f64) {
    let f = |t: f64| s2_factor(beam, t);
    let n = 3000;
    let ts: Vec<f64> = (0..=n).map(|i| 1.5 * i as f64 / n as f64).collect();
    let k = (0..=n).min_by(|&i, &j| f(ts[i]).partial_cmp(&f(ts[j])).unwrap()).unwrap();
    let (mut lo, mut hi) = (ts[k.saturating_sub(1)], ts[(k + 1).min(n)]);
    let h = 1e-5;
    let g = |t: f64| f(t + h) - f((t - h).max(0.0));
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    (f(t), t)
}

fn closed_form_minimum() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (a, b) in [(0.0, 9.0), (10.0, 10.0), (10.0, 8.0), (9.0, 9.0), (4.0, 7.0)] {
        let beam = InputBeam::phase_locked(a, b).unwrap();
        let closed = minimum_for(a, b);
        let (s_num, t_num) = numeric_minimum(&beam);
        let (ds, dt) = ((s_num - closed.s2_min).abs(), (t_num - closed.kt_min).abs());
        passed &= ds <= 1e-8 && dt <= 1e-8;
        parts.push(format!(
            "({a},{b}): s2_min {:.10} (|d| {ds:.1e}), kt_min {:.10} (|d| {dt:.1e})",
            closed.s2_min, closed.kt_min
        ));
    }
    let r1 = (minimum_for(0.0, 9.0).s2_min - 1.0 / 10f64.sqrt()).abs();
    let r2 = (minimum_for(10.0, 10.0).s2_min - 0.5583).abs();
    passed &= r1 <= 1e-12 && r2 <= 1e-4;
    parts.push(format!("reference 1/sqrt(10) |d| {r1:.1e}, 0.5583 |d| {r2:.1e}"));
    outcome(passed, parts.join("; "))
}

fn condition_boundary() -> Outcome {
    let m = region_map((0.0, 10.0), (0.0, 10.0), 64).unwrap();
    let (near, far) = m.condition_mismatches();
    let squeezed: usize = m.squeezed.iter().flatten().filter(|s| **s).count();
    outcome(
        far.is_empty(),
        format!(
            "64x64 over [0,10]^2: {squeezed} squeezed cells, {} mismatches in the boundary band, {} elsewhere, {} monotonicity violations",
            near.len(),
            far.len(),
            m.monotonicity_violations()
        ),
    )
}

fn phase_minima() -> Outcome {
    let grid = SweepGrid::default();
    let start = Instant::now();
    let r = minimize_phase_time((10.0, 10.0), &Axis::S2, &grid).unwrap();
    let h = grid.spacing();
    let dist = |x: f64, y: f64| {
        let d = (x - y).rem_euclid(TAU);
        d.min(TAU - d)
    };
    let mut matched = Vec::new();
    for m in &r.minima {
        let hit = PHASE_LOCKED_POINTS
            .iter()
            .position(|&(px, py)| dist(m.phi_x, px) <= 2.0 * h[0] && dist(m.phi_y, py) <= 2.0 * h[1]);
        matched.push(hit);
        let beam = InputBeam::from_intensities(10.0, 10.0, m.phi_x, m.phi_y).unwrap();
        record(&stokes_moments(&beam, m.kt).unwrap());
    }
    let mut distinct: Vec<usize> = matched.iter().flatten().copied().collect();
    distinct.sort();
    distinct.dedup();
    let passed = r.minima.len() == 4 && matched.iter().all(|m| m.is_some()) && distinct.len() == 4;
    let offsets: Vec<String> =
        r.minima.iter().map(|m| format!("({:.4},{:.4},{:.4})={:.6}", m.phi_x, m.phi_y, m.kt, m.factor)).collect();
    outcome(
        passed,
        format!(
            "{} minima on the 64x64x128 grid ({:.1} s): {}; phase-locked factor {:.6}",
            r.minima.len(),
            start.elapsed().as_secs_f64(),
            offsets.join(" "),
            minimum_for(10.0, 10.0).s2_min
        ),
    )
}

fn operator_identities() -> Outcome {
    let (mut casimir, mut comm, mut edge) = (0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for (a, b) in [(0.25, 1.0), (1.0, 0.25), (1.0, 2.0), (2.0, 1.0)] {
        for (px, py) in [(0.0, 0.0), (FRAC_PI_4, FRAC_PI_4), (0.3, 2.1), (1.7, 4.4)] {
            for kt in [0.0, 0.05, 0.15, 0.25] {
                let beam = InputBeam::from_intensities(a, b, px, py).unwrap();
                let r = full_two_mode_moments(&beam, kt, 64).unwrap();
                record(&r.moments);
                let rhs = r.moments.mean0_sq + 2.0 * r.moments.mean0;
                casimir = casimir.max(r.casimir_defect / rhs.max(1.0));
                comm = comm.max(r.commutator_defect / (1.0 + r.moments.mean0));
                edge = edge.max(r.edge_population);
                count += 1;
            }
        }
    }
    outcome(
        casimir < 1e-8 && comm < 1e-8 && edge < 1e-10,
        format!(
            "{count} two-mode states at dim 64: casimir {casimir:.1e}, commutators {comm:.1e} (< 1e-8); edge population {edge:.1e} (< 1e-10)"
        ),
    )
}

fn uncertainty_relations() -> Outcome {
    let (worst, count) = *SHORTFALL.lock().unwrap();
    outcome(worst <= 1e-9, format!("{count} evaluated moment sets, worst relative shortfall {worst:.1e} (<= 1e-9)"))
}

fn deviation_ledger_check() -> Outcome {
    let entries = deviation_ledger(&TruncationPolicy::default(), 1e-8);
    let required =
        ["s1-mean-vacuum-term", "s2-variance-literal-reading", "s2-variance-grouped-reading", "partition-optimum"];
    let present = required.iter().all(|id| entries.iter().any(|e| e.id == *id && e.oracle.is_some()));
    let agree = entries.iter().all(|e| e.engine_matches_oracle);
    let verdicts: Vec<String> = entries
        .iter()
        .filter(|e| required.contains(&e.id.as_str()))
        .map(|e| {
            format!(
                "{}: printed {:.6} oracle {:.6} -> {}",
                e.id,
                e.printed.unwrap_or(f64::NAN),
                e.oracle.unwrap_or(f64::NAN),
                if e.printed_holds { "holds" } else { "rejected" }
            )
        })
        .collect();
    outcome(
        present && agree,
        format!("{} entries, engine matches oracle on all: {agree}; {}", entries.len(), verdicts.join("; ")),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("Heisenberg fidelity", heisenberg_fidelity),
        ("coherent baseline", coherent_baseline),
        ("window correctness", window_correctness),
        ("closed-form minimum", closed_form_minimum),
        ("condition boundary", condition_boundary),
        ("phase minima", phase_minima),
        ("operator identities", operator_identities),
        ("uncertainty relations", uncertainty_relations),
        ("deviation ledger", deviation_ledger_check),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        if !o.passed {
            failed += 1;
        }
        println!("{} {:>2} {name} [{secs:.1} s]: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
