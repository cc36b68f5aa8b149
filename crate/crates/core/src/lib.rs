//! Polarization squeezing of two-mode coherent light after degenerate
//! parametric amplification of one polarization mode.
//!
//! The crate has three layers:
//!
//! * [`analytic`]: exact moments of the Stokes operators and the closed
//!   forms for the S2 squeezing factor, its window and its minimum.
//! * [`oracle`]: a truncated Fock-space simulator that evolves the state
//!   numerically and serves as an independent check on every closed form.
//! * [`sweep`]: grid-and-refine exploration over phases, time and axis.
//!
//! [`verify`] ties the first two together on a standard parameter grid.

// Range checks are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod axis;
pub mod beam;
pub mod error;
pub mod moments;
pub mod oracle;
pub mod sweep;
pub mod verify;

pub use analytic::{
    criteria_compare, squeezing_factor_axis, stokes_moments, MinimumResult, SqueezingReport, SqueezingWindow,
};
pub use axis::{axis_complement_max, Axis};
pub use beam::{InputBeam, InteractionParams};
pub use error::{Error, Result};
pub use moments::StokesMoments;
pub use num_complex::Complex64;
