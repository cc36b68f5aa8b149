//! Truncated Fock-space simulation of the interaction.
//!
//! Independent of the analytic engine: states are evolved numerically and
//! moments are evaluated as inner products, never through normal ordering.

pub mod fock;
pub mod moments;
pub mod propagator;
pub mod truncation;

pub use fock::{build_coherent, build_coherent_with, coherent_min_dim, FockState, Ladder};
pub use moments::{
    evolve_coherent, full_two_mode_moments, oracle_moments_at, stokes_moments_product, TwoModeReport, TwoModeState,
};
pub use propagator::{squeeze_generator, squeeze_propagator, PropagatorCache, SpectralPropagator};
pub use truncation::{
    converged_moments, evolved_dim_hint, truncation_check, truncation_check_batch, BatchConvergence, ConvergenceReport,
    TruncationPolicy,
};
