use serde_json::{json, Value};
use stokes_squeeze::analytic::{minimum_for, optimal_partition, phase_locked_s2, window_report, zero_crossings_for};
use stokes_squeeze::oracle::converged_moments;
use stokes_squeeze::sweep::{
    best_axis, default_axis_grid, linspace, minimize_phase_time, region_map, scan_axes, SweepGrid,
};
use stokes_squeeze::verify::{run_verification, StandardGrid, VerifyConfig};
use stokes_squeeze::{
    criteria_compare, squeezing_factor_axis, stokes_moments, Axis, Error, InputBeam, InteractionParams,
    SqueezingReport, StokesMoments,
};

use crate::args::{AnalyzeArgs, AxisSelector, BeamArgs, FigureArgs, IntensityArgs, KtRange, SweepArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{Field, Report, Table};

type Result<T> = std::result::Result<T, CliError>;

pub const FIGURE2_CASES: [(f64, f64); 3] = [(10.0, 8.0), (9.0, 9.0), (8.0, 10.0)];

fn beam_of(b: &BeamArgs) -> Result<InputBeam> {
    Ok(InputBeam::from_intensities(b.intensities.ix, b.intensities.iy, b.phx, b.phy)?)
}

fn beam_json(b: &BeamArgs) -> Value {
    json!({
        "intensity_x": b.intensities.ix,
        "intensity_y": b.intensities.iy,
        "phi_x": b.phx,
        "phi_y": b.phy,
    })
}

fn fixed_axis(sel: AxisSelector) -> Option<Axis> {
    match sel {
        AxisSelector::S1 => Some(Axis::S1),
        AxisSelector::S2 => Some(Axis::S2),
        AxisSelector::S3 => Some(Axis::S3),
        AxisSelector::Free => None,
    }
}

fn selector_name(sel: AxisSelector) -> &'static str {
    match sel {
        AxisSelector::S1 => "s1",
        AxisSelector::S2 => "s2",
        AxisSelector::S3 => "s3",
        AxisSelector::Free => "free",
    }
}

fn report_for(m: &StokesMoments, sel: AxisSelector) -> Result<SqueezingReport> {
    match fixed_axis(sel) {
        Some(n) => Ok(squeezing_factor_axis(m, &n)?),
        None => best_axis(m, &default_axis_grid())
            .map(|(best, _)| best)
            .ok_or_else(|| Error::DegenerateAxis("every candidate axis is degenerate".into()).into()),
    }
}

fn kt_values(r: &KtRange) -> Result<Vec<f64>> {
    let v = linspace(r.kt_start, r.kt_stop, r.steps)?;
    InteractionParams::new(r.kt_start, None)?;
    Ok(v)
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Report> {
    let beam = beam_of(&a.beam)?;
    let kt = InteractionParams::new(a.kt, None)?.kt();
    let m = stokes_moments(&beam, kt)?;
    let report = report_for(&m, a.axis)?;
    let criteria = criteria_compare(&m, &report.axis)?;

    let mut failure = None;
    let oracle = if a.oracle {
        let c = converged_moments(&beam, kt, &a.policy.policy())?;
        let deviation = m.max_relative_deviation(&c.moments);
        let agrees = deviation < a.tolerance;
        if !agrees {
            failure = Some(format!("engine and oracle differ by {deviation:.3e} (tolerance {:.1e})", a.tolerance));
        }
        Some((c, deviation, agrees))
    } else {
        None
    };

    let n = report.axis.components();
    let mut table = Table::new(&[
        "intensity_x",
        "intensity_y",
        "phi_x",
        "phi_y",
        "kt",
        "s0",
        "s1",
        "s2",
        "s3",
        "v1",
        "v2",
        "v3",
        "cov12",
        "cov13",
        "cov23",
        "n1",
        "n2",
        "n3",
        "variance",
        "denominator",
        "factor",
        "degree",
        "squeezed",
        "coherent_bound",
        "coordinate_bound",
        "general",
        "below_strict",
        "chain_ordered",
        "oracle_dim",
        "oracle_deviation",
    ]);
    table.push(vec![
        a.beam.intensities.ix.into(),
        a.beam.intensities.iy.into(),
        a.beam.phx.into(),
        a.beam.phy.into(),
        kt.into(),
        m.mean0.into(),
        m.mean[0].into(),
        m.mean[1].into(),
        m.mean[2].into(),
        m.cov[0][0].into(),
        m.cov[1][1].into(),
        m.cov[2][2].into(),
        m.cov[0][1].into(),
        m.cov[0][2].into(),
        m.cov[1][2].into(),
        n[0].into(),
        n[1].into(),
        n[2].into(),
        report.variance.into(),
        report.denominator.into(),
        report.factor.into(),
        report.degree.into(),
        report.is_squeezed().into(),
        report.criteria.coherent_bound.into(),
        report.criteria.coordinate_bound.into(),
        report.criteria.general.into(),
        criteria.below_strict.into(),
        criteria.chain_ordered.into(),
        oracle.as_ref().map_or(Field::Missing, |(c, _, _)| c.final_dim.into()),
        oracle.as_ref().map_or(Field::Missing, |(_, d, _)| Field::Num(*d)),
    ]);

    let result = json!({
        "beam": beam_json(&a.beam),
        "kt": kt,
        "axis_selector": selector_name(a.axis),
        "moments": m,
        "report": report,
        "squeezed": report.is_squeezed(),
        "criteria": criteria,
        "oracle": oracle.map(|(c, deviation, agrees)| json!({
            "dims": c.dims,
            "drifts": c.drifts,
            "final_dim": c.final_dim,
            "drift": c.drift,
            "max_relative_deviation": deviation,
            "tolerance": a.tolerance,
            "agrees": agrees,
        })),
    });
    Ok(Report { command: "analyze", result, table, failure })
}

pub fn window(i: &IntensityArgs) -> Result<Report> {
    let beam = InputBeam::phase_locked(i.ix, i.iy)?;
    let w = window_report(&beam)?;
    let m = minimum_for(i.ix, i.iy);
    let x_turns_negative = zero_crossings_for(i.ix, i.iy).is_some() && i.iy * i.iy + i.iy > i.ix;
    let verdict = if m.squeezed { "squeezing" } else { "no squeezing" };
    let case = match w.case_label {
        stokes_squeeze::analytic::CaseLabel::Case1 => "case1",
        stokes_squeeze::analytic::CaseLabel::Case2 => "case2",
    };
    let t01_negative = w.t01.is_some_and(|t| t < 0.0);

    let mut table = Table::new(&[
        "intensity_x",
        "intensity_y",
        "case",
        "t01",
        "t02",
        "t1",
        "t2",
        "kt_min",
        "s2_min",
        "squeezing_condition",
        "x_turns_negative",
        "t01_negative",
        "ordered",
        "verdict",
    ]);
    table.push(vec![
        i.ix.into(),
        i.iy.into(),
        case.into(),
        w.t01.into(),
        w.t02.into(),
        w.t1.into(),
        w.t2.into(),
        m.kt_min.into(),
        m.s2_min.into(),
        m.squeezed.into(),
        x_turns_negative.into(),
        t01_negative.into(),
        w.is_ordered().into(),
        verdict.into(),
    ]);
    let result = json!({
        "intensity_x": i.ix,
        "intensity_y": i.iy,
        "case": case,
        "t01": w.t01,
        "t02": w.t02,
        "t1": w.t1,
        "t2": w.t2,
        "kt_min": m.kt_min,
        "s2_min": finite_or_null(m.s2_min),
        "flags": {
            "squeezing_condition": m.squeezed,
            "x_turns_negative": x_turns_negative,
            "t01_negative": t01_negative,
            "ordered": w.is_ordered(),
        },
        "verdict": verdict,
    });
    Ok(Report { command: "window", result, table, failure: None })
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

/// Phase-locked `(S2 factor, X)`; the factor is infinite where X vanishes.
fn locked_trace(beam: &InputBeam, kt: f64) -> Result<(f64, f64)> {
    match phase_locked_s2(beam, kt) {
        Ok((d, s2)) => Ok((s2, d.x_mean)),
        Err(Error::SingularBoundary { .. }) => Ok((f64::INFINITY, 0.0)),
        Err(e) => Err(e.into()),
    }
}

pub fn figure(f: &FigureArgs) -> Result<Report> {
    match f.which {
        1 => figure1(f),
        2 => figure2(f),
        _ => figure3(f),
    }
}

fn figure1(f: &FigureArgs) -> Result<Report> {
    let beam = InputBeam::phase_locked(f.ix, f.iy)?;
    let kts = kt_values(&f.range)?;
    let mut table = Table::new(&["kt", "s2", "x"]);
    for &kt in &kts {
        let (s2, x) = locked_trace(&beam, kt)?;
        table.push(vec![kt.into(), s2.into(), x.into()]);
    }
    let w = window_report(&beam)?;
    let m = minimum_for(f.ix, f.iy);
    let result = json!({
        "figure": 1,
        "intensity_x": f.ix,
        "intensity_y": f.iy,
        "window": w,
        "s2_min": finite_or_null(m.s2_min),
        "kt_min": m.kt_min,
        "data": table.to_json(),
    });
    Ok(Report { command: "figure", result, table, failure: None })
}

fn figure2(f: &FigureArgs) -> Result<Report> {
    let cases: Vec<(f64, f64)> = if f.cases.is_empty() { FIGURE2_CASES.to_vec() } else { f.cases.clone() };
    let kts = kt_values(&f.range)?;
    let mut table = Table::new(&["intensity_x", "intensity_y", "kt", "d2"]);
    let mut summaries = Vec::new();
    for &(a, b) in &cases {
        let beam = InputBeam::phase_locked(a, b)?;
        let mut best = f64::NEG_INFINITY;
        for &kt in &kts {
            let d2 = 1.0 - locked_trace(&beam, kt)?.0;
            best = best.max(d2);
            table.push(vec![a.into(), b.into(), kt.into(), d2.into()]);
        }
        let m = minimum_for(a, b);
        let partition = if a + b > 0.0 { Some(optimal_partition(a + b)?) } else { None };
        summaries.push(json!({
            "intensity_x": a,
            "intensity_y": b,
            "total": a + b,
            "max_degree_sampled": best,
            "max_degree": finite_or_null(1.0 - m.s2_min),
            "kt_min": m.kt_min,
            "partition_optimum_degree": partition.map(|p| 1.0 - p.s_min),
        }));
    }
    let deepest = summaries.iter().zip(&cases).filter_map(|(s, c)| s["max_degree"].as_f64().map(|d| (d, *c))).fold(
        None,
        |acc: Option<(f64, (f64, f64))>, x| match acc {
            Some(a) if a.0 >= x.0 => Some(a),
            _ => Some(x),
        },
    );
    let result = json!({
        "figure": 2,
        "cases": summaries,
        "deepest_case": deepest.map(|(_, (a, b))| json!({ "intensity_x": a, "intensity_y": b })),
        "data": table.to_json(),
    });
    Ok(Report { command: "figure", result, table, failure: None })
}

fn figure3(f: &FigureArgs) -> Result<Report> {
    let map = region_map((0.0, f.alpha_max), (0.0, f.beta_max), f.resolution)?;
    let mut table = Table::new(&["intensity_x", "intensity_y", "s2_min", "squeezed"]);
    for (i, &a) in map.alpha_sq.iter().enumerate() {
        for (j, &b) in map.beta_sq.iter().enumerate() {
            table.push(vec![a.into(), b.into(), map.s2_min[i][j].into(), map.squeezed[i][j].into()]);
        }
    }
    let (near, far) = map.condition_mismatches();
    let result = json!({
        "figure": 3,
        "alpha_max": f.alpha_max,
        "beta_max": f.beta_max,
        "resolution": f.resolution,
        "boundary": "squeezed exactly where |beta|^4 > 4 |alpha|^2",
        "boundary_mismatches": { "near": near.len(), "far": far.len() },
        "monotonicity_violations": map.monotonicity_violations(),
        "data": table.to_json(),
    });
    Ok(Report { command: "figure", result, table, failure: None })
}

pub fn sweep(s: &SweepArgs) -> Result<Report> {
    let i = s.beam.intensities;
    match fixed_axis(s.axis) {
        Some(axis) => {
            let grid = SweepGrid {
                phi_x_points: s.phi_points,
                phi_y_points: s.phi_points,
                kt_points: s.kt_points,
                kt_max: s.kt_max,
                ..SweepGrid::default()
            };
            let r = minimize_phase_time((i.ix, i.iy), &axis, &grid)?;
            let mut table = Table::new(&["kind", "phi_x", "phi_y", "kt", "n1", "n2", "n3", "factor"]);
            let points = r.minima.iter().map(|p| ("local", p)).chain(std::iter::once(("global", &r.global)));
            for (kind, p) in points {
                let n = p.axis.components();
                table.push(vec![
                    kind.into(),
                    p.phi_x.into(),
                    p.phi_y.into(),
                    p.kt.into(),
                    n[0].into(),
                    n[1].into(),
                    n[2].into(),
                    p.factor.into(),
                ]);
            }
            let locked = (s.axis == AxisSelector::S2).then(|| {
                let m = minimum_for(i.ix, i.iy);
                json!({ "s2_min": finite_or_null(m.s2_min), "kt_min": m.kt_min })
            });
            let result = json!({
                "intensity_x": i.ix,
                "intensity_y": i.iy,
                "axis_selector": selector_name(s.axis),
                "grid": grid,
                "minima": r.minima,
                "global": r.global,
                "evaluated": r.evaluated,
                "degenerate": r.degenerate,
                "phase_locked": locked,
            });
            Ok(Report { command: "sweep", result, table, failure: None })
        }
        None => {
            let beam = beam_of(&s.beam)?;
            if s.kt_points < 2 {
                return Err(Error::InvalidInput("kt-points must be at least 2".into()).into());
            }
            let kts = linspace(0.0, s.kt_max, s.kt_points)?;
            let entries = scan_axes(&beam, &kts, &default_axis_grid())?;
            let mut table = Table::new(&["kt", "n1", "n2", "n3", "factor", "coordinate_factor"]);
            for e in &entries {
                let n = e.best.axis.components();
                table.push(vec![
                    e.kt.into(),
                    n[0].into(),
                    n[1].into(),
                    n[2].into(),
                    e.best.factor.into(),
                    e.best_coordinate.map(|c| c.factor).into(),
                ]);
            }
            let result = json!({
                "beam": beam_json(&s.beam),
                "axis_selector": "free",
                "scan": entries,
            });
            Ok(Report { command: "sweep", result, table, failure: None })
        }
    }
}

pub fn verify(v: &VerifyArgs) -> Result<Report> {
    let defaults = StandardGrid::default();
    let pick = |given: &Vec<f64>, d: Vec<f64>| if given.is_empty() { d } else { given.clone() };
    let config = VerifyConfig {
        grid: StandardGrid {
            intensities: pick(&v.intensities, defaults.intensities),
            phases: pick(&v.phases, defaults.phases),
            kts: pick(&v.kts, defaults.kts),
        },
        policy: v.policy.policy(),
        tolerance: v.tolerance,
        two_mode_dim: v.two_mode_dim,
        ledger: !v.no_ledger,
    };
    let r = run_verification(&config)?;

    let mut table = Table::new(&["section", "name", "value", "limit", "passed", "detail"]);
    for d in &r.deviations {
        let at = d.at.map_or(String::new(), |c| {
            format!("ix={} iy={} phx={} phy={} kt={}", c.intensity_x, c.intensity_y, c.phi_x, c.phi_y, c.kt)
        });
        let ok = d.max_relative < config.tolerance;
        table.push(vec![
            "deviation".into(),
            d.quantity.as_str().into(),
            d.max_relative.into(),
            config.tolerance.into(),
            ok.into(),
            at.into(),
        ]);
    }
    for c in &r.invariants {
        table.push(vec![
            "invariant".into(),
            c.name.as_str().into(),
            c.value.into(),
            c.tolerance.into(),
            c.passed.into(),
            Field::Missing,
        ]);
    }
    for n in &r.non_converged {
        let c = n.cell;
        let name = format!("ix={} iy={} phx={} phy={} kt={}", c.intensity_x, c.intensity_y, c.phi_x, c.phi_y, c.kt);
        table.push(vec![
            "non_converged".into(),
            name.into(),
            Field::Missing,
            Field::Missing,
            false.into(),
            n.message.as_str().into(),
        ]);
    }
    for e in &r.ledger {
        let verdict = if e.printed_holds { "holds" } else { "rejected" };
        let detail = format!(
            "{verdict}; printed={}; engine={}; oracle={}; {}",
            fmt_opt(e.printed),
            e.engine,
            fmt_opt(e.oracle),
            e.note
        );
        table.push(vec![
            "ledger".into(),
            e.id.as_str().into(),
            e.engine.into(),
            e.printed.into(),
            e.engine_matches_oracle.into(),
            detail.into(),
        ]);
    }

    let failure = (!r.passed).then(|| {
        let failed: Vec<&str> = r.invariants.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        format!(
            "verification failed: {} non-converged cells; failed checks: {}",
            r.non_converged.len(),
            failed.join(", ")
        )
    });
    let result = json!({ "config": config, "report": r });
    Ok(Report { command: "verify", result, table, failure })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |v| v.to_string())
}
