//! Propagators for `H = k (a^dag^2 + a^2)` on a truncated Fock space.
//!
//! The generator only couples levels `n` and `n + 2`, so it splits into an
//! even and an odd block, each a real symmetric tridiagonal matrix.
//!
//! Two routes are provided. [`squeeze_propagator`] builds the dense unitary
//! with a scaling-and-squaring matrix exponential; it is used for operator
//! checks at modest dimensions. [`SpectralPropagator`] diagonalizes each
//! parity block once per dimension and then evolves vectors for any `kt` in
//! `O(dim^2)`; the standard verification grid runs on it.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::beam::check_kt;
use crate::error::{Error, Result};

/// Tolerance on `max |U^dag U - I|` over the interior block.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Number of top Fock levels treated as the truncation edge: about 10%.
pub fn edge_margin(dim: usize) -> usize {
    dim.div_ceil(10).max(1)
}

/// `a^dag^2 + a^2` truncated to `dim` levels.
pub fn squeeze_generator(dim: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(2) {
        let v = (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = v;
        g[(n, n + 2)] = v;
    }
    g
}

/// Annihilation operator truncated to `dim` levels.
pub fn annihilation_matrix(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Largest entry of `U^dag U - I` over rows and columns below `block`.
pub fn unitarity_defect(u: &DMatrix<C64>, block: usize) -> f64 {
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

/// Dense `U = exp(-i kt (a^dag^2 + a^2))` by scaling and squaring.
pub fn squeeze_propagator(kt: f64, dim: usize) -> Result<DMatrix<C64>> {
    check_kt(kt)?;
    if dim < 2 {
        return Err(Error::TruncationError(format!("dimension {dim} is below 2")));
    }
    let generator = squeeze_generator(dim).map(|v| C64::new(0.0, -kt * v));
    let u = generator.exp();
    let block = dim - edge_margin(dim);
    let defect = unitarity_defect(&u, block);
    if !(defect < UNITARITY_TOL) {
        return Err(Error::TruncationError(format!(
            "propagator at kt = {kt}, dim = {dim} is not unitary on the interior block (defect {defect:.3e})"
        )));
    }
    Ok(u)
}

struct ParityBlock {
    /// Fock levels covered by this block.
    levels: Vec<usize>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl ParityBlock {
    fn new(dim: usize, parity: usize) -> Self {
        let levels: Vec<usize> = (parity..dim).step_by(2).collect();
        let m = levels.len();
        let mut block = DMatrix::zeros(m, m);
        for i in 0..m.saturating_sub(1) {
            let n = levels[i];
            let v = (((n + 1) * (n + 2)) as f64).sqrt();
            block[(i, i + 1)] = v;
            block[(i + 1, i)] = v;
        }
        let eig = SymmetricEigen::new(block);
        Self { levels, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors }
    }

    fn apply(&self, kt: f64, psi: &DVector<C64>, out: &mut DVector<C64>) {
        let v = &self.eigenvectors;
        let m = self.levels.len();
        let local = DVector::from_fn(m, |i, _| psi[self.levels[i]]);
        // coefficients in the eigenbasis, rotated by the phases
        let mut coeffs = DVector::from_element(m, C64::new(0.0, 0.0));
        for k in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..m {
                acc += local[i] * v[(i, k)];
            }
            coeffs[k] = acc * C64::from_polar(1.0, -kt * self.eigenvalues[k]);
        }
        for i in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..m {
                acc += coeffs[k] * v[(i, k)];
            }
            out[self.levels[i]] = acc;
        }
    }
}

/// Eigendecomposition of the truncated generator, reusable for every `kt`.
pub struct SpectralPropagator {
    dim: usize,
    even: ParityBlock,
    odd: ParityBlock,
}

impl SpectralPropagator {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::TruncationError(format!("dimension {dim} is below 2")));
        }
        Ok(Self { dim, even: ParityBlock::new(dim, 0), odd: ParityBlock::new(dim, 1) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `U(kt) psi`.
    pub fn apply(&self, kt: f64, psi: &DVector<C64>) -> Result<DVector<C64>> {
        check_kt(kt)?;
        if psi.len() != self.dim {
            return Err(Error::InvalidInput(format!("state has dimension {}, propagator {}", psi.len(), self.dim)));
        }
        let mut out = DVector::from_element(self.dim, C64::new(0.0, 0.0));
        self.even.apply(kt, psi, &mut out);
        self.odd.apply(kt, psi, &mut out);
        Ok(out)
    }

    /// Dense `U(kt)`, column by column.
    pub fn dense(&self, kt: f64) -> Result<DMatrix<C64>> {
        let mut u = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let mut e = DVector::from_element(self.dim, C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            u.set_column(j, &self.apply(kt, &e)?);
        }
        Ok(u)
    }
}

/// Shared cache of propagators. Reads proceed concurrently; a missing entry
/// is computed outside the lock and inserted by a single writer.
/// Dense propagators keyed by `(kt bits, dim)`.
type DenseCache = HashMap<(u64, usize), Arc<DMatrix<C64>>>;

#[derive(Default)]
pub struct PropagatorCache {
    spectral: RwLock<HashMap<usize, Arc<SpectralPropagator>>>,
    dense: RwLock<DenseCache>,
}

impl PropagatorCache {
    pub fn global() -> &'static PropagatorCache {
        static CACHE: OnceLock<PropagatorCache> = OnceLock::new();
        CACHE.get_or_init(PropagatorCache::default)
    }

    pub fn spectral(&self, dim: usize) -> Result<Arc<SpectralPropagator>> {
        if let Some(p) = self.spectral.read().expect("cache lock poisoned").get(&dim) {
            return Ok(Arc::clone(p));
        }
        let fresh = Arc::new(SpectralPropagator::new(dim)?);
        let mut map = self.spectral.write().expect("cache lock poisoned");
        Ok(Arc::clone(map.entry(dim).or_insert(fresh)))
    }

    /// Dense propagator keyed by `(kt, dim)`.
    pub fn dense(&self, kt: f64, dim: usize) -> Result<Arc<DMatrix<C64>>> {
        let key = (kt.to_bits(), dim);
        if let Some(u) = self.dense.read().expect("cache lock poisoned").get(&key) {
            return Ok(Arc::clone(u));
        }
        let fresh = Arc::new(squeeze_propagator(kt, dim)?);
        let mut map = self.dense.write().expect("cache lock poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(fresh)))
    }

    pub fn len(&self) -> (usize, usize) {
        (
            self.spectral.read().expect("cache lock poisoned").len(),
            self.dense.read().expect("cache lock poisoned").len(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fock::{coherent_amplitudes, FockState, Ladder};

    fn max_abs(m: &DMatrix<C64>, block: usize) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..block {
            for j in 0..block {
                worst = worst.max(m[(i, j)].norm());
            }
        }
        worst
    }

    #[test]
    fn identity_at_zero_time() {
        let u = squeeze_propagator(0.0, 24).unwrap();
        assert!(max_abs(&(u - DMatrix::identity(24, 24)), 24) < 1e-15);
    }

    #[test]
    fn rejects_negative_time() {
        assert!(squeeze_propagator(-0.1, 16).is_err());
    }

    #[test]
    fn spectral_matches_dense() {
        for kt in [0.0, 0.1, 0.4, 0.8] {
            let dense = squeeze_propagator(kt, 128).unwrap();
            let spectral = SpectralPropagator::new(128).unwrap().dense(kt).unwrap();
            assert!(max_abs(&(dense - spectral), 128) < 1e-11, "kt = {kt}");
        }
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let p = SpectralPropagator::new(256).unwrap();
        for kt in [0.1f64, 0.3, 0.5] {
            let psi = p.apply(kt, &coherent_amplitudes(C64::new(0.0, 0.0), 256)).unwrap();
            let n = FockState::unchecked(psi).expect(Ladder::Number).re;
            let s = (2.0 * kt).sinh();
            assert!((n - s * s).abs() < 1e-10 * (1.0 + s * s), "kt = {kt}: {n} vs {}", s * s);
        }
    }

    #[test]
    fn heisenberg_relation_on_small_block() {
        let dim = 128;
        let a = annihilation_matrix(dim);
        let kt = 0.1;
        let u = squeeze_propagator(kt, dim).unwrap();
        let (c, s) = ((2.0 * kt).cosh(), (2.0 * kt).sinh());
        let lhs = u.adjoint() * &a * &u;
        let rhs = a.map(|x| x * c) - a.adjoint().map(|x| x * C64::new(0.0, s));
        assert!(max_abs(&(lhs - rhs), 32) < 1e-12);
    }

    #[test]
    fn composition_on_interior_block() {
        let dim = 160;
        let p = SpectralPropagator::new(dim).unwrap();
        let (u1, u2, u12) = (p.dense(0.05).unwrap(), p.dense(0.1).unwrap(), p.dense(0.15).unwrap());
        let diff = &u1 * &u2 - u12;
        assert!(max_abs(&diff, dim - edge_margin(dim)) < 1e-9);
    }

    #[test]
    fn cache_reuses_entries() {
        let cache = PropagatorCache::default();
        let a = cache.spectral(40).unwrap();
        let b = cache.spectral(40).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        let u = cache.dense(0.2, 24).unwrap();
        let v = cache.dense(0.2, 24).unwrap();
        assert!(Arc::ptr_eq(&u, &v));
        assert_eq!(cache.len(), (1, 1));
    }
}
