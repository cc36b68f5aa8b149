use criterion::{criterion_group, criterion_main, Criterion};
use stokes_squeeze::sweep::{default_axis_grid, linspace, minimize_phase_time, region_map, scan_axes, SweepGrid};
use stokes_squeeze::{Axis, InputBeam};

fn phase_time(c: &mut Criterion) {
    let mut g = c.benchmark_group("minimize_phase_time");
    g.sample_size(10);
    let small = SweepGrid { phi_x_points: 16, phi_y_points: 16, kt_points: 32, ..SweepGrid::default() };
    g.bench_function("16x16x32", |b| b.iter(|| minimize_phase_time((10.0, 10.0), &Axis::S2, &small).unwrap()));
    g.bench_function("default", |b| {
        b.iter(|| minimize_phase_time((10.0, 10.0), &Axis::S2, &SweepGrid::default()).unwrap())
    });
    g.finish();
}

fn axes(c: &mut Criterion) {
    let beam = InputBeam::from_intensities(3.0, 5.0, 0.4, 1.9).unwrap();
    let kts = linspace(0.0, 1.0, 64).unwrap();
    let grid = default_axis_grid();
    c.bench_function("scan_axes_64", |b| b.iter(|| scan_axes(&beam, &kts, &grid).unwrap()));
}

fn region(c: &mut Criterion) {
    c.bench_function("region_map_101", |b| b.iter(|| region_map((0.0, 10.0), (0.0, 10.0), 101).unwrap()));
}

criterion_group!(benches, phase_time, axes, region);
criterion_main!(benches);
