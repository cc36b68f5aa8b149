//! Closed-form evaluation of the squeezing diagnostics.

pub mod factor;
pub mod heisenberg;
pub mod kernel;
pub mod phase_locked;
pub mod printed;

pub use factor::{criteria_compare, squeezing_factor_axis, CriteriaComparison, CriteriaFlags, SqueezingReport};
pub use heisenberg::{heisenberg_coeffs, HeisenbergCoeffs};
pub use kernel::{evolved_mode_moments, stokes_moments, stokes_moments_from_modes, ModeMoments, NormalPoly};
pub use phase_locked::{
    equal_intensity_summary, minimum_for, optimal_partition, phase_locked_s2, s2_min, s2_min_at_partition,
    s2_of_growth, squeezing_window, window_for, window_report, x_zero_crossings, zero_crossings_for, CaseLabel,
    EqualIntensitySummary, MinimumResult, OptimalPartition, PhaseLockedDecomposition, SqueezingWindow, WindowEdges,
    ZeroCrossings,
};
