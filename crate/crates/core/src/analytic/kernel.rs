//! Exact moment kernel.
//!
//! Moments are obtained by normal ordering. The evolved x-mode operator
//! `a(t) = c a - i s a^dag` is expanded over a coherent state, and each
//! Stokes product is expanded into normal-ordered two-mode monomials whose
//! expectation factorizes over the product state.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::analytic::heisenberg::{heisenberg_coeffs, HeisenbergCoeffs};
use crate::beam::InputBeam;
use crate::error::{Error, Result};
use crate::moments::StokesMoments;

/// Highest total degree `p + q` the kernel supports.
pub const MAX_DEGREE: usize = 4;
const N: usize = MAX_DEGREE + 1;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Normal-ordered single-mode polynomial; `coeffs[p][q]` multiplies
/// `a^dag^p a^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalPoly {
    coeffs: [[C64; N]; N],
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Coefficients of `a^q a^dag^r = sum_k C(q,k) C(r,k) k! a^dag^(r-k) a^(q-k)`.
fn reorder(q: usize, r: usize) -> impl Iterator<Item = (usize, f64)> {
    (0..=q.min(r)).map(move |k| (k, binomial(q, k) * binomial(r, k) * factorial(k)))
}

impl NormalPoly {
    pub fn zero() -> Self {
        Self { coeffs: [[ZERO; N]; N] }
    }

    pub fn identity() -> Self {
        Self::monomial(0, 0, ONE)
    }

    pub fn monomial(p: usize, q: usize, c: C64) -> Self {
        let mut out = Self::zero();
        out.coeffs[p][q] = c;
        out
    }

    /// `a(t) = c a - i s a^dag`.
    pub fn evolved_annihilation(h: &HeisenbergCoeffs) -> Self {
        let mut out = Self::zero();
        out.coeffs[0][1] = C64::new(h.c, 0.0);
        out.coeffs[1][0] = -I * h.s;
        out
    }

    /// `a(t)^dag = c a^dag + i s a`.
    pub fn evolved_creation(h: &HeisenbergCoeffs) -> Self {
        let mut out = Self::zero();
        out.coeffs[1][0] = C64::new(h.c, 0.0);
        out.coeffs[0][1] = I * h.s;
        out
    }

    pub fn coeff(&self, p: usize, q: usize) -> C64 {
        self.coeffs[p][q]
    }

    pub fn degree(&self) -> usize {
        let mut d = 0;
        for p in 0..N {
            for q in 0..N {
                if self.coeffs[p][q] != ZERO {
                    d = d.max(p + q);
                }
            }
        }
        d
    }

    /// Operator product, normal ordered. Fails if the result would exceed
    /// [`MAX_DEGREE`].
    pub fn mul(&self, rhs: &NormalPoly) -> Result<NormalPoly> {
        if self.degree() + rhs.degree() > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "product degree {} exceeds {MAX_DEGREE}",
                self.degree() + rhs.degree()
            )));
        }
        let mut out = Self::zero();
        for p in 0..N {
            for q in 0..N {
                let a = self.coeffs[p][q];
                if a == ZERO {
                    continue;
                }
                for r in 0..N {
                    for s in 0..N {
                        let b = rhs.coeffs[r][s];
                        if b == ZERO {
                            continue;
                        }
                        for (k, w) in reorder(q, r) {
                            out.coeffs[p + r - k][q + s - k] += a * b * w;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Expectation value against a table of normal-ordered moments.
    pub fn expect(&self, moments: &ModeMoments) -> C64 {
        let mut acc = ZERO;
        for p in 0..N {
            for q in 0..N - p {
                acc += self.coeffs[p][q] * moments.get(p, q);
            }
        }
        acc
    }
}

/// Table of normal-ordered moments `<a^dag^p a^q>` for `p + q <= 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    table: [[C64; N]; N],
}

impl ModeMoments {
    /// Moments of a coherent state: `<a^dag^p a^q> = conj(z)^p z^q`.
    pub fn coherent(z: C64) -> Self {
        let mut table = [[ZERO; N]; N];
        for (p, row) in table.iter_mut().enumerate() {
            for (q, entry) in row.iter_mut().enumerate().take(N - p) {
                *entry = z.conj().powu(p as u32) * z.powu(q as u32);
            }
        }
        Self { table }
    }

    /// Moments of the x mode after interaction time `kt`, starting from the
    /// coherent amplitude `alpha`.
    pub fn evolved(alpha: C64, h: &HeisenbergCoeffs) -> Self {
        let coherent = Self::coherent(alpha);
        let create = NormalPoly::evolved_creation(h);
        let annihilate = NormalPoly::evolved_annihilation(h);
        let mut create_pow = [NormalPoly::identity(); N];
        let mut annihilate_pow = [NormalPoly::identity(); N];
        for p in 1..N {
            create_pow[p] = create_pow[p - 1].mul(&create).expect("degree <= 4");
            annihilate_pow[p] = annihilate_pow[p - 1].mul(&annihilate).expect("degree <= 4");
        }
        let mut table = [[ZERO; N]; N];
        for p in 0..N {
            for q in 0..N - p {
                let word = create_pow[p].mul(&annihilate_pow[q]).expect("degree <= 4");
                table[p][q] = word.expect(&coherent);
            }
        }
        Self { table }
    }

    /// Builds a table directly, e.g. from a numerically evolved state.
    pub fn from_table(table: [[C64; N]; N]) -> Self {
        Self { table }
    }

    pub fn get(&self, p: usize, q: usize) -> C64 {
        if p + q > MAX_DEGREE {
            ZERO
        } else {
            self.table[p][q]
        }
    }
}

/// `<a_x(t)^dag^p a_x(t)^q>` for a coherent x-mode input `alpha`.
pub fn evolved_mode_moments(alpha: C64, kt: f64, p: usize, q: usize) -> Result<C64> {
    if p + q > MAX_DEGREE {
        return Err(Error::Unsupported(format!("moment order p + q = {} exceeds {MAX_DEGREE}", p + q)));
    }
    let h = heisenberg_coeffs(kt)?;
    Ok(ModeMoments::evolved(alpha, &h).get(p, q))
}

/// Normal-ordered two-mode polynomial: key `(p, q, r, s)` multiplies
/// `a^dag^p a^q b^dag^r b^s`.
#[derive(Debug, Clone, Default, PartialEq)]
struct TwoModePoly(BTreeMap<(usize, usize, usize, usize), C64>);

impl TwoModePoly {
    fn term(c: C64, x: (usize, usize), y: (usize, usize)) -> Self {
        let mut m = BTreeMap::new();
        m.insert((x.0, x.1, y.0, y.1), c);
        Self(m)
    }

    fn add(mut self, rhs: TwoModePoly) -> Self {
        for (k, v) in rhs.0 {
            *self.0.entry(k).or_insert(ZERO) += v;
        }
        self
    }

    fn scale(mut self, c: C64) -> Self {
        for v in self.0.values_mut() {
            *v *= c;
        }
        self
    }

    fn mul(&self, rhs: &TwoModePoly) -> TwoModePoly {
        let mut out = BTreeMap::new();
        for (&(p, q, r, s), &a) in &self.0 {
            for (&(p2, q2, r2, s2), &b) in &rhs.0 {
                for (kx, wx) in reorder(q, p2) {
                    for (ky, wy) in reorder(s, r2) {
                        let key = (p + p2 - kx, q + q2 - kx, r + r2 - ky, s + s2 - ky);
                        *out.entry(key).or_insert(ZERO) += a * b * wx * wy;
                    }
                }
            }
        }
        out.retain(|_, v: &mut C64| *v != ZERO);
        TwoModePoly(out)
    }

    fn expect(&self, x: &ModeMoments, y: &ModeMoments) -> C64 {
        self.0.iter().map(|(&(p, q, r, s), &c)| c * x.get(p, q) * y.get(r, s)).sum()
    }
}

/// Normal-ordered expansions of the Stokes operators and their symmetrized
/// pairwise products. They do not depend on the state, so they are built
/// once.
struct StokesAlgebra {
    first: [TwoModePoly; 4],
    second: [[TwoModePoly; 4]; 4],
}

fn stokes_algebra() -> &'static StokesAlgebra {
    static ALGEBRA: OnceLock<StokesAlgebra> = OnceLock::new();
    ALGEBRA.get_or_init(|| {
        let nx = TwoModePoly::term(ONE, (1, 1), (0, 0));
        let ny = TwoModePoly::term(ONE, (0, 0), (1, 1));
        // a^dag b and b^dag a
        let up_down = TwoModePoly::term(ONE, (1, 0), (0, 1));
        let down_up = TwoModePoly::term(ONE, (0, 1), (1, 0));
        let s0 = nx.clone().add(ny.clone());
        let s1 = nx.add(ny.scale(-ONE));
        let s2 = up_down.clone().add(down_up.clone());
        let s3 = up_down.scale(-I).add(down_up.scale(I));
        let first = [s0, s1, s2, s3];
        let second = std::array::from_fn(|j| {
            std::array::from_fn(|k| first[j].mul(&first[k]).add(first[k].mul(&first[j])).scale(C64::new(0.5, 0.0)))
        });
        StokesAlgebra { first, second }
    })
}

/// Assembles Stokes moments of a product state from per-mode moment tables.
pub fn stokes_moments_from_modes(x: &ModeMoments, y: &ModeMoments) -> StokesMoments {
    let alg = stokes_algebra();
    let first: [f64; 4] = std::array::from_fn(|j| alg.first[j].expect(x, y).re);
    let mut cov = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in j..3 {
            let c = alg.second[j + 1][k + 1].expect(x, y).re - first[j + 1] * first[k + 1];
            cov[j][k] = c;
            cov[k][j] = c;
        }
    }
    StokesMoments {
        mean0: first[0],
        mean0_sq: alg.second[0][0].expect(x, y).re,
        mean: [first[1], first[2], first[3]],
        cov,
    }
}

/// Stokes moments after interaction time `kt`. The y mode is untouched by
/// the interaction and stays coherent.
pub fn stokes_moments(beam: &InputBeam, kt: f64) -> Result<StokesMoments> {
    let h = heisenberg_coeffs(kt)?;
    Ok(stokes_moments_from_modes(&ModeMoments::evolved(beam.alpha, &h), &ModeMoments::coherent(beam.beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn commutator_is_one() {
        let a = NormalPoly::monomial(0, 1, ONE);
        let ad = NormalPoly::monomial(1, 0, ONE);
        let comm = a.mul(&ad).unwrap().coeffs[0][0] - ad.mul(&a).unwrap().coeffs[0][0];
        assert_eq!(comm, ONE);
        // a a^dag = a^dag a + 1
        let aad = a.mul(&ad).unwrap();
        assert_eq!(aad.coeff(1, 1), ONE);
        assert_eq!(aad.coeff(0, 0), ONE);
    }

    #[test]
    fn rejects_high_order() {
        assert!(matches!(evolved_mode_moments(ONE, 0.1, 3, 2), Err(Error::Unsupported(_))));
        let a2 = NormalPoly::monomial(0, 2, ONE);
        let a3 = NormalPoly::monomial(0, 3, ONE);
        assert!(a2.mul(&a3).is_err());
    }

    #[test]
    fn coherent_number_at_zero_time() {
        let alpha = C64::new(1.3, -0.4);
        let n = evolved_mode_moments(alpha, 0.0, 1, 1).unwrap();
        assert_relative_eq!(n.re, alpha.norm_sqr(), max_relative = 1e-14);
        assert!(n.im.abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        for kt in [0.05f64, 0.3, 0.9] {
            let s = (2.0 * kt).sinh();
            let n = evolved_mode_moments(ZERO, kt, 1, 1).unwrap();
            assert_relative_eq!(n.re, s * s, max_relative = 1e-13);
        }
    }

    #[test]
    fn number_at_small_amplitude() {
        // (c^2 + s^2)|a|^2 + s^2 - 2cs|a|^2 sin(2 phi) with phi = 0
        let (c, s) = (0.2f64.cosh(), 0.2f64.sinh());
        let expected = (c * c + s * s) * 0.25 + s * s;
        let n = evolved_mode_moments(C64::new(0.5, 0.0), 0.1, 1, 1).unwrap();
        assert_relative_eq!(n.re, expected, max_relative = 1e-14);
        assert!((n.re - 0.3108).abs() < 1e-4);
    }

    #[test]
    fn evolved_mean_amplitude() {
        let alpha = C64::from_polar(2.0, 0.7);
        let kt = 0.35;
        let h = heisenberg_coeffs(kt).unwrap();
        let m = evolved_mode_moments(alpha, kt, 0, 1).unwrap();
        let expected = h.c * alpha - I * h.s * alpha.conj();
        assert!((m - expected).norm() < 1e-13);
    }
}
