//! Input beam and interaction parameters.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{invalid, Result};

/// Tolerance used when matching beam phases against the phase-locked set.
pub const PHASE_LOCK_TOL: f64 = 1e-9;

/// The four `(phi_x, phi_y)` combinations at which the S2 factor reduces to
/// the closed form `Y / |X|`.
pub const PHASE_LOCKED_POINTS: [(f64, f64); 4] = [
    (FRAC_PI_4, FRAC_PI_4),
    (5.0 * FRAC_PI_4, FRAC_PI_4),
    (FRAC_PI_4, 5.0 * FRAC_PI_4),
    (5.0 * FRAC_PI_4, 5.0 * FRAC_PI_4),
];

/// Two-mode coherent input `|alpha, beta>` with x-mode amplitude `alpha` and
/// y-mode amplitude `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputBeam {
    pub alpha: C64,
    pub beta: C64,
}

/// Wraps an angle into `[0, 2pi)`.
pub fn canonical_phase(phi: f64) -> f64 {
    let wrapped = phi.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Shortest signed distance between two angles, in `[-pi, pi]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

impl InputBeam {
    /// Validates the two amplitudes. Both components must be finite.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let finite = |z: C64| z.re.is_finite() && z.im.is_finite();
        if !finite(alpha) || !finite(beta) {
            return Err(invalid(format!("non-finite amplitude ({alpha}, {beta})")));
        }
        Ok(Self { alpha, beta })
    }

    /// Builds a beam from intensities (photon numbers) and phases in radians.
    pub fn from_intensities(intensity_x: f64, intensity_y: f64, phi_x: f64, phi_y: f64) -> Result<Self> {
        for (name, v) in [("intensity_x", intensity_x), ("intensity_y", intensity_y)] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !phi_x.is_finite() || !phi_y.is_finite() {
            return Err(invalid("phases must be finite"));
        }
        Self::new(C64::from_polar(intensity_x.sqrt(), phi_x), C64::from_polar(intensity_y.sqrt(), phi_y))
    }

    /// `alpha = A cos(theta) e^{i phi_x}`, `beta = A sin(theta) e^{i phi_y}`.
    pub fn from_polar_params(amplitude: f64, theta: f64, phi_x: f64, phi_y: f64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(invalid(format!("amplitude must be finite and >= 0, got {amplitude}")));
        }
        if !theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(invalid(format!("theta must lie in [0, pi/2], got {theta}")));
        }
        if !phi_x.is_finite() || !phi_y.is_finite() {
            return Err(invalid("phases must be finite"));
        }
        Self::new(C64::from_polar(amplitude * theta.cos(), phi_x), C64::from_polar(amplitude * theta.sin(), phi_y))
    }

    /// Phase-locked beam at `(pi/4, pi/4)` with the given intensities.
    pub fn phase_locked(intensity_x: f64, intensity_y: f64) -> Result<Self> {
        Self::from_intensities(intensity_x, intensity_y, FRAC_PI_4, FRAC_PI_4)
    }

    pub fn intensity_x(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn intensity_y(&self) -> f64 {
        self.beta.norm_sqr()
    }

    /// Total photon number `N = |alpha|^2 + |beta|^2`.
    pub fn total(&self) -> f64 {
        self.intensity_x() + self.intensity_y()
    }

    pub fn is_vacuum(&self) -> bool {
        self.alpha == C64::new(0.0, 0.0) && self.beta == C64::new(0.0, 0.0)
    }

    /// Global amplitude `A`, with `A^2 = N`.
    pub fn amplitude(&self) -> f64 {
        self.alpha.norm().hypot(self.beta.norm())
    }

    /// Mode angle `theta` in `[0, pi/2]`. Zero for the vacuum.
    pub fn theta(&self) -> f64 {
        self.beta.norm().atan2(self.alpha.norm())
    }

    /// Partition angle `chi = atan(|beta| / |alpha|)`; `None` for the vacuum,
    /// where the split of photons between modes is undefined.
    pub fn chi(&self) -> Option<f64> {
        (!self.is_vacuum()).then(|| self.theta())
    }

    pub fn phi_x(&self) -> f64 {
        canonical_phase(self.alpha.arg())
    }

    pub fn phi_y(&self) -> f64 {
        canonical_phase(self.beta.arg())
    }

    /// True when the beam sits on one of the four phase-locked points. The
    /// phase of an empty mode is irrelevant and is not checked.
    pub fn is_phase_locked(&self, tol: f64) -> bool {
        let close = |amp: C64, target: f64| amp.norm_sqr() == 0.0 || phase_distance(amp.arg(), target).abs() <= tol;
        PHASE_LOCKED_POINTS.iter().any(|&(px, py)| close(self.alpha, px) && close(self.beta, py))
    }
}

/// Interaction strength, always consumed as the dimensionless product `kt`.
/// The coupling `k` is carried only for converting back to absolute times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionParams {
    kt: f64,
    k: Option<f64>,
}

impl InteractionParams {
    pub fn new(kt: f64, k: Option<f64>) -> Result<Self> {
        check_kt(kt)?;
        if let Some(k) = k {
            if !k.is_finite() || k <= 0.0 {
                return Err(invalid(format!("coupling k must be finite and > 0, got {k}")));
            }
        }
        Ok(Self { kt, k })
    }

    pub fn kt(&self) -> f64 {
        self.kt
    }

    pub fn k(&self) -> Option<f64> {
        self.k
    }

    /// Absolute time `t = kt / k`, if the coupling is known.
    pub fn time(&self) -> Option<f64> {
        self.k.map(|k| self.kt / k)
    }
}

pub(crate) fn check_kt(kt: f64) -> Result<()> {
    if !kt.is_finite() || kt < 0.0 {
        return Err(invalid(format!("kt must be finite and >= 0, got {kt}")));
    }
    Ok(())
}
