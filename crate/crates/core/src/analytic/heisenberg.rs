//! Bogoliubov coefficients of the degenerate parametric amplifier.

use serde::Serialize;

use crate::beam::check_kt;
use crate::error::Result;

/// `c = cosh 2kt`, `s = sinh 2kt`, so that `a(t) = c a - i s a^dag`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeisenbergCoeffs {
    pub c: f64,
    pub s: f64,
}

impl HeisenbergCoeffs {
    /// `c - s = e^{-2kt}`, computed without cancellation.
    pub fn c_minus_s(&self) -> f64 {
        1.0 / (self.c + self.s)
    }
}

pub fn heisenberg_coeffs(kt: f64) -> Result<HeisenbergCoeffs> {
    check_kt(kt)?;
    Ok(HeisenbergCoeffs { c: (2.0 * kt).cosh(), s: (2.0 * kt).sinh() })
}
