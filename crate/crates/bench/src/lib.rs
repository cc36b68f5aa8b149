//! Shared inputs for the benchmarks.

use stokes_squeeze::InputBeam;

/// Beams spanning weak to strong, locked and unlocked.
pub fn reference_beams() -> Vec<(&'static str, InputBeam)> {
    let mk = |a, b, px, py| InputBeam::from_intensities(a, b, px, py).expect("valid beam");
    vec![
        ("weak", mk(0.25, 1.0, 0.3, 1.2)),
        ("locked_10_8", InputBeam::phase_locked(10.0, 8.0).expect("valid beam")),
        ("unlocked_4_9", mk(4.0, 9.0, 2.0, 5.0)),
    ]
}
