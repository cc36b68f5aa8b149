//! Published closed forms, kept verbatim as regression fixtures.
//!
//! Several published expressions disagree with the exact Heisenberg-picture
//! expansion. Both versions live here so that the verification harness can
//! put each one next to the Fock-space oracle. The `exact_*` functions are
//! the closed forms that agree with the moment kernel and the oracle.

use num_complex::Complex64 as C64;

use crate::analytic::heisenberg::heisenberg_coeffs;
use crate::beam::InputBeam;
use crate::error::Result;

struct Parts {
    c: f64,
    s: f64,
    a: f64,
    b: f64,
    abs_a: f64,
    abs_b: f64,
    phi_x: f64,
    phi_y: f64,
}

fn parts(beam: &InputBeam, kt: f64) -> Result<Parts> {
    let h = heisenberg_coeffs(kt)?;
    let arg = |z: C64| if z.norm_sqr() == 0.0 { 0.0 } else { z.arg() };
    Ok(Parts {
        c: h.c,
        s: h.s,
        a: beam.intensity_x(),
        b: beam.intensity_y(),
        abs_a: beam.alpha.norm(),
        abs_b: beam.beta.norm(),
        phi_x: arg(beam.alpha),
        phi_y: arg(beam.beta),
    })
}

/// Published means of `(S1, S2, S3)`.
pub fn printed_means(beam: &InputBeam, kt: f64) -> Result<[f64; 3]> {
    let Parts { c, s, a, b, abs_a, abs_b, phi_x, phi_y } = parts(beam, kt)?;
    let ab = abs_a * abs_b;
    Ok([
        (c * c + s * s) * a - b - 2.0 * c * s * a * (2.0 * phi_x).sin(),
        2.0 * c * ab * (phi_x - phi_y).cos() - 2.0 * s * ab * (phi_x + phi_y).sin(),
        2.0 * s * ab * (phi_x + phi_y).cos() - 2.0 * c * ab * (phi_x - phi_y).sin(),
    ])
}

/// Published variances `(V1, V2, V3)`; V3 is printed identical to V2.
pub fn printed_variances(beam: &InputBeam, kt: f64) -> Result<[f64; 3]> {
    let Parts { c, s, a, b, phi_x, phi_y, .. } = parts(beam, kt)?;
    let (c2, s2) = (c * c, s * s);
    let v1 = (c2 + s2) * a + 2.0 * c2 * s2 * (2.0 * a + 1.0) + b - 4.0 * c * s * (c2 + s2) * a * (2.0 * phi_x).sin();
    let v2 = c2 * (a + b) + s2 * (a + b + 1.0) - 2.0 * c * s * (a * (2.0 * phi_x).sin() + b * (2.0 * phi_y).sin());
    Ok([v1, v2, v2])
}

/// Means of `(S1, S2, S3)` from the exact expansion. Differs from
/// [`printed_means`] by the `s^2` vacuum contribution to `<S1>`.
pub fn exact_means(beam: &InputBeam, kt: f64) -> Result<[f64; 3]> {
    let mut m = printed_means(beam, kt)?;
    let h = heisenberg_coeffs(kt)?;
    m[0] += h.s * h.s;
    Ok(m)
}

/// Variances `(V1, V2, V3)` from the exact expansion.
pub fn exact_variances(beam: &InputBeam, kt: f64) -> Result<[f64; 3]> {
    let Parts { c, s, a, b, phi_x, phi_y, .. } = parts(beam, kt)?;
    let (c2, s2) = (c * c, s * s);
    let (sx, sy) = ((2.0 * phi_x).sin(), (2.0 * phi_y).sin());
    let v1 = (c2 + s2).powi(2) * a + 2.0 * c2 * s2 * (2.0 * a + 1.0) + b - 4.0 * c * s * (c2 + s2) * a * sx;
    let v2 = (c2 + s2) * (a + b) + s2 - 2.0 * c * s * (a * sx + b * sy);
    let v3 = (c2 + s2) * (a + b) + s2 - 2.0 * c * s * (a * sx - b * sy);
    Ok([v1, v2, v3])
}

/// Literal reading of the published S2 numerator, `(c-s)^2 |alpha|^2 + |beta|^2 + s^2`.
pub fn literal_y_reading(a: f64, b: f64, kt: f64) -> Result<f64> {
    let h = heisenberg_coeffs(kt)?;
    Ok((-4.0 * kt).exp() * a + b + h.s * h.s)
}

/// Grouped reading of the published S2 numerator, `(c-s)^2 (|alpha|^2 + |beta|^2) + s^2`.
pub fn grouped_y_reading(a: f64, b: f64, kt: f64) -> Result<f64> {
    let h = heisenberg_coeffs(kt)?;
    Ok((-4.0 * kt).exp() * (a + b) + h.s * h.s)
}

/// Published denominator of the phase-locked factor, `(c-s)^2 |alpha|^2 - |beta|^2`
/// (no `s^2` term).
pub fn printed_x(a: f64, b: f64, kt: f64) -> Result<f64> {
    heisenberg_coeffs(kt)?;
    Ok((-4.0 * kt).exp() * a - b)
}

/// Published window edges, `(1/4) ln(1 + 2|beta|^2 -+ 2 sqrt(|beta|^4 - 4|alpha|^2))`.
pub fn printed_window(a: f64, b: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a;
    (disc >= 0.0).then(|| {
        let r = 2.0 * disc.sqrt();
        ((1.0 + 2.0 * b - r).ln() / 4.0, (1.0 + 2.0 * b + r).ln() / 4.0)
    })
}

/// Published second zero crossing for equal intensities, `(1/4) ln(1 + |alpha|^2)`.
pub fn printed_equal_t02(intensity: f64) -> f64 {
    (1.0 + intensity).ln() / 4.0
}

/// Published growth-variable form `((4|alpha|^2 + |beta|^2) + x^2) / ((x - x1)(x - x2))`.
pub fn printed_growth_form(a: f64, b: f64, x: f64) -> Option<f64> {
    let disc = b * b - 4.0 * a;
    (disc >= 0.0).then(|| {
        let (x1, x2) = (b - disc.sqrt(), b + disc.sqrt());
        ((4.0 * a + b) + x * x) / ((x - x1) * (x - x2))
    })
}

/// Published optimum over the partition angle, `1 / sqrt(1 + N^2)`.
pub fn printed_optimum(total: f64) -> f64 {
    1.0 / (1.0 + total * total).sqrt()
}

/// Published minimum at fixed `N` and partition angle `chi`.
pub fn printed_partition_minimum(total: f64, chi: f64) -> f64 {
    let r = (1.0 + total * total).sqrt();
    (r - 1.0) / (1.0 + total * total * chi.sin().powi(2) - r)
}
