use criterion::{black_box, criterion_group, criterion_main, Criterion};
use stokes_squeeze::analytic::{minimum_for, window_report};
use stokes_squeeze::{squeezing_factor_axis, stokes_moments, Axis, InputBeam};
use stokes_squeeze_bench::reference_beams;

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("stokes_moments");
    for (name, beam) in reference_beams() {
        g.bench_function(name, |b| b.iter(|| stokes_moments(black_box(&beam), black_box(0.4)).unwrap()));
    }
    g.finish();
}

fn factor(c: &mut Criterion) {
    let beam = InputBeam::phase_locked(10.0, 8.0).unwrap();
    let m = stokes_moments(&beam, 0.5).unwrap();
    c.bench_function("squeezing_factor_s2", |b| b.iter(|| squeezing_factor_axis(black_box(&m), &Axis::S2).unwrap()));
}

fn closed_forms(c: &mut Criterion) {
    let beam = InputBeam::phase_locked(10.0, 8.0).unwrap();
    c.bench_function("window_report", |b| b.iter(|| window_report(black_box(&beam)).unwrap()));
    c.bench_function("minimum_for", |b| b.iter(|| minimum_for(black_box(10.0), black_box(8.0))));
}

criterion_group!(benches, moments, factor, closed_forms);
criterion_main!(benches);
