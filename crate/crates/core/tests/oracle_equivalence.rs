use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use stokes_squeeze::analytic::printed::{exact_variances, printed_variances};
use stokes_squeeze::oracle::{
    build_coherent, converged_moments, full_two_mode_moments, oracle_moments_at, stokes_moments_product,
    truncation_check, TruncationPolicy,
};
use stokes_squeeze::{stokes_moments, Error, InputBeam};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_matches_oracle(
        a in 0.0f64..10.0, b in 0.0f64..10.0,
        px in 0.0f64..TAU, py in 0.0f64..TAU,
        kt in 0.0f64..0.8,
    ) {
        let beam = InputBeam::from_intensities(a, b, px, py).unwrap();
        let o = converged_moments(&beam, kt, &TruncationPolicy::default()).unwrap();
        let e = stokes_moments(&beam, kt).unwrap();
        prop_assert!(e.max_relative_deviation(&o.moments) < 1e-8);
    }
}

#[test]
fn v3_differs_from_v2_by_the_y_phase_term() {
    let policy = TruncationPolicy::default();
    for (a, b, px, py, kt) in [(4.0, 9.0, 0.3, FRAC_PI_4, 0.25), (1.0, 2.5, 1.1, 0.2, 0.5), (9.0, 1.0, 4.0, 2.0, 0.1)] {
        let beam = InputBeam::from_intensities(a, b, px, py).unwrap();
        let o = converged_moments(&beam, kt, &policy).unwrap().moments;
        let (c, s) = ((2.0 * kt).cosh(), (2.0 * kt).sinh());
        let expected = 4.0 * c * s * b * (2.0 * py).sin();
        let diff = o.cov[2][2] - o.cov[1][1];
        assert!((diff - expected).abs() < 1e-8 * (1.0 + o.mean0), "{diff} vs {expected}");
        let exact = exact_variances(&beam, kt).unwrap();
        assert!((exact[2] - o.cov[2][2]).abs() < 1e-8 * (1.0 + o.mean0));
        let printed = printed_variances(&beam, kt).unwrap();
        assert_eq!(printed[1], printed[2]);
    }
}

#[test]
fn ten_eight_beam_coherent_baseline() {
    let beam = InputBeam::phase_locked(10.0, 8.0).unwrap();
    let x = build_coherent(beam.alpha, 64).unwrap();
    let m = stokes_moments_product(&x, beam.beta).unwrap();
    let expected = [2.0, 2.0 * 80f64.sqrt(), 0.0];
    for (j, e) in expected.iter().enumerate() {
        assert!((m.mean[j] - e).abs() < 1e-10, "mean {j}");
        assert!((m.cov[j][j] - 18.0).abs() < 1e-10, "variance {j}");
    }
}

#[test]
fn vacuum_has_no_fluctuations() {
    let x = build_coherent(C64::new(0.0, 0.0), 32).unwrap();
    let m = stokes_moments_product(&x, C64::new(0.0, 0.0)).unwrap();
    assert!(m.mean.iter().chain(m.variances().iter()).all(|v| v.abs() < 1e-15));
    let beam = InputBeam::phase_locked(0.0, 0.0).unwrap();
    let r = full_two_mode_moments(&beam, 0.0, 16).unwrap();
    assert!(r.moments.mean.iter().chain(r.moments.variances().iter()).all(|v| v.abs() < 1e-15));
}

#[test]
fn two_mode_path_agrees_with_factorized_path() {
    let beam = InputBeam::new(C64::new(0.5, 0.0), C64::new(0.8, 0.0)).unwrap();
    let r = full_two_mode_moments(&beam, 0.2, 32).unwrap();
    let p = oracle_moments_at(&beam, 0.2, 32).unwrap();
    assert!(r.moments.max_relative_deviation(&p) < 1e-9);
}

#[test]
fn coherent_state_converges_immediately() {
    let beam = InputBeam::new(C64::new(1.0, 0.0), C64::new(0.5, 0.5)).unwrap();
    let r = converged_moments(&beam, 0.0, &TruncationPolicy::default()).unwrap();
    assert!(r.drift < 1e-14);
    assert_eq!(r.dims.len(), 2);
}

#[test]
fn strong_squeezing_converges() {
    let beam = InputBeam::phase_locked(10.0, 4.0).unwrap();
    let r = converged_moments(&beam, 0.8, &TruncationPolicy::default()).unwrap();
    assert!(r.drift < 1e-8);
    assert!(r.final_dim > 500);
    let e = stokes_moments(&beam, 0.8).unwrap();
    assert!(e.max_relative_deviation(&r.moments) < 1e-8);
}

#[test]
fn overflowing_truncation_is_reported() {
    // sinh^2(2 kt) is about 745 at kt = 1.8, far above the 256-level ceiling
    let policy = TruncationPolicy { max_dim: 256, ..TruncationPolicy::default() };
    let beam = InputBeam::phase_locked(1.0, 1.0).unwrap();
    let r = truncation_check(|d| oracle_moments_at(&beam, 1.8, d), 64, &policy);
    assert!(matches!(r, Err(Error::NonConverged { max_dim: 256, .. })), "{r:?}");
}
