//! Stokes moments evaluated on truncated Fock states.
//!
//! Each Stokes operator is a short sum of words `c X Y`, with `X` acting on
//! the x mode and `Y` on the y mode. Products of two Stokes operators are
//! evaluated word by word as inner products of ladder-shifted vectors, so no
//! normal ordering is involved.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::beam::{check_kt, InputBeam};
use crate::error::{Error, Result};
use crate::moments::StokesMoments;
use crate::oracle::fock::{build_coherent, coherent_amplitudes, coherent_min_dim, FockState, Ladder};
use crate::oracle::propagator::{edge_margin, PropagatorCache};

type Word = (C64, Ladder, Ladder);

const ONE: C64 = C64::new(1.0, 0.0);

fn stokes_words(j: usize) -> [Word; 2] {
    use Ladder::*;
    match j {
        0 => [(ONE, Number, Identity), (ONE, Identity, Number)],
        1 => [(ONE, Number, Identity), (-ONE, Identity, Number)],
        2 => [(ONE, Create, Annihilate), (ONE, Annihilate, Create)],
        _ => [(C64::new(0.0, -1.0), Create, Annihilate), (C64::new(0.0, 1.0), Annihilate, Create)],
    }
}

/// `<A B>` for every pair of ladder operators, as `<A^dag psi, B psi>`.
struct PairTable([[C64; 4]; 4]);

impl PairTable {
    fn new(psi: &DVector<C64>) -> Self {
        let shifted: Vec<DVector<C64>> = Ladder::ALL.iter().map(|op| op.apply(psi)).collect();
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let left = Ladder::ALL[i].adjoint().index();
                shifted[left].dotc(&shifted[k])
            })
        }))
    }

    fn single(&self, op: Ladder) -> C64 {
        self.0[Ladder::Identity.index()][op.index()]
    }

    fn pair(&self, a: Ladder, b: Ladder) -> C64 {
        self.0[a.index()][b.index()]
    }
}

fn assemble(first: [f64; 4], second: impl Fn(usize, usize) -> C64) -> StokesMoments {
    let mut cov = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            let sym = 0.5 * (second(j + 1, k + 1) + second(k + 1, j + 1)).re;
            cov[j][k] = sym - first[j + 1] * first[k + 1];
        }
    }
    StokesMoments { mean0: first[0], mean0_sq: second(0, 0).re, mean: [first[1], first[2], first[3]], cov }
}

/// Stokes moments of `x_state (x) |beta>`.
pub fn stokes_moments_product(x_state: &FockState, beta: C64) -> Result<StokesMoments> {
    let y = build_coherent(beta, coherent_min_dim(beta.norm_sqr()))?;
    Ok(product_moments(x_state.amplitudes(), y.amplitudes()))
}

pub(crate) fn product_moments(x: &DVector<C64>, y: &DVector<C64>) -> StokesMoments {
    let (tx, ty) = (PairTable::new(x), PairTable::new(y));
    let first: [f64; 4] = std::array::from_fn(|j| {
        stokes_words(j).iter().map(|&(c, a, b)| c * tx.single(a) * ty.single(b)).sum::<C64>().re
    });
    let second = |j: usize, k: usize| {
        let mut acc = C64::new(0.0, 0.0);
        for &(c1, a1, b1) in &stokes_words(j) {
            for &(c2, a2, b2) in &stokes_words(k) {
                acc += c1 * c2 * tx.pair(a1, a2) * ty.pair(b1, b2);
            }
        }
        acc
    };
    assemble(first, second)
}

/// Evolves `|alpha>` for `kt` on `dim` levels with the cached spectral propagator.
/// The input amplitudes are not checked against a minimum dimension; the
/// caller judges truncation by convergence in `dim`.
pub fn evolve_coherent(alpha: C64, kt: f64, dim: usize) -> Result<FockState> {
    check_kt(kt)?;
    let p = PropagatorCache::global().spectral(dim)?;
    Ok(FockState::unchecked(p.apply(kt, &coherent_amplitudes(alpha, dim))?))
}

/// Product-state oracle moments at a fixed x-mode truncation.
pub fn oracle_moments_at(beam: &InputBeam, kt: f64, dim: usize) -> Result<StokesMoments> {
    let x = evolve_coherent(beam.alpha, kt, dim)?;
    stokes_moments_product(&x, beam.beta)
}

/// Largest truncation accepted by the two-mode path.
pub const TWO_MODE_MAX_DIM: usize = 64;

/// A state on the joint truncated space; entry `(m, n)` is the amplitude of
/// `|m>_x |n>_y`.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    amplitudes: DMatrix<C64>,
}

impl TwoModeState {
    pub fn product(x: &DVector<C64>, y: &DVector<C64>) -> Self {
        Self { amplitudes: x * y.transpose() }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn amplitudes(&self) -> &DMatrix<C64> {
        &self.amplitudes
    }

    fn apply_x(op: Ladder, m: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = m.clone();
        for (j, col) in m.column_iter().enumerate() {
            out.set_column(j, &op.apply(&col.into_owned()));
        }
        out
    }

    fn apply_y(op: Ladder, m: &DMatrix<C64>) -> DMatrix<C64> {
        Self::apply_x(op, &m.transpose()).transpose()
    }

    /// `S_j |Psi>`.
    pub fn apply_stokes(&self, j: usize) -> DMatrix<C64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for (c, a, b) in stokes_words(j) {
            out += Self::apply_x(a, &Self::apply_y(b, &self.amplitudes)).map(|v| v * c);
        }
        out
    }
}

fn inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum()
}

/// Moments computed on the full two-mode space together with the operator
/// identities that hold there.
#[derive(Debug, Clone)]
pub struct TwoModeReport {
    pub moments: StokesMoments,
    /// `<[S_j, S_k]>` for `j, k` in `1..=3`.
    pub commutators: [[C64; 3]; 3],
    /// Largest `|<[S_j, S_k]> - 2i eps_jkl <S_l>|`.
    pub commutator_defect: f64,
    /// `|<S1^2 + S2^2 + S3^2> - <S0^2> - 2<S0>|`.
    pub casimir_defect: f64,
    /// Norm of the state in the top tenth of each mode's levels.
    pub edge_population: f64,
}

/// Evolves `|alpha, beta>` on a `dim x dim` truncation with the dense
/// propagator and evaluates every Stokes moment on the joint space.
pub fn full_two_mode_moments(beam: &InputBeam, kt: f64, dim: usize) -> Result<TwoModeReport> {
    check_kt(kt)?;
    if !(2..=TWO_MODE_MAX_DIM).contains(&dim) {
        return Err(Error::InvalidInput(format!("two-mode dimension {dim} is outside 2..={TWO_MODE_MAX_DIM}")));
    }
    let u = PropagatorCache::global().dense(kt, dim)?;
    let x = &*u * coherent_amplitudes(beam.alpha, dim);
    let y = coherent_amplitudes(beam.beta, dim);
    let state = TwoModeState::product(&x, &y);
    Ok(two_mode_report(&state))
}

pub fn two_mode_report(state: &TwoModeState) -> TwoModeReport {
    let psi = state.amplitudes();
    let applied: Vec<DMatrix<C64>> = (0..4).map(|j| state.apply_stokes(j)).collect();
    let first: [f64; 4] = std::array::from_fn(|j| inner(psi, &applied[j]).re);
    let gram: [[C64; 4]; 4] = std::array::from_fn(|j| std::array::from_fn(|k| inner(&applied[j], &applied[k])));
    let moments = assemble(first, |j, k| gram[j][k]);

    let mut commutators = [[C64::new(0.0, 0.0); 3]; 3];
    let mut commutator_defect = 0.0f64;
    for j in 0..3 {
        for k in 0..3 {
            let g = gram[j + 1][k + 1];
            let comm = C64::new(0.0, 2.0 * g.im);
            commutators[j][k] = comm;
            let expected = match (k + 3 - j) % 3 {
                1 => C64::new(0.0, 2.0 * first[1 + (k + 1) % 3]),
                2 => C64::new(0.0, -2.0 * first[1 + (j + 1) % 3]),
                _ => C64::new(0.0, 0.0),
            };
            commutator_defect = commutator_defect.max((comm - expected).norm());
        }
    }
    let casimir_defect = (moments.stokes_square_sum() - moments.mean0_sq - 2.0 * moments.mean0).abs();

    let d = state.dim();
    let edge = d - edge_margin(d);
    let edge_population =
        psi.iter().enumerate().filter(|(i, _)| i % d >= edge || i / d >= edge).map(|(_, v)| v.norm_sqr()).sum();

    TwoModeReport { moments, commutators, commutator_defect, casimir_defect, edge_population }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::kernel::stokes_moments;

    #[test]
    fn coherent_product_matches_kernel() {
        let beam = InputBeam::from_intensities(2.0, 3.0, 0.4, 1.3).unwrap();
        let x = build_coherent(beam.alpha, 64).unwrap();
        let m = stokes_moments_product(&x, beam.beta).unwrap();
        let k = stokes_moments(&beam, 0.0).unwrap();
        assert!(m.max_relative_deviation(&k) < 1e-10);
    }

    #[test]
    fn evolved_product_matches_kernel() {
        let beam = InputBeam::from_intensities(1.0, 4.0, 0.7, 2.0).unwrap();
        let m = oracle_moments_at(&beam, 0.25, 160).unwrap();
        let k = stokes_moments(&beam, 0.25).unwrap();
        assert!(m.max_relative_deviation(&k) < 1e-9, "{}", m.max_relative_deviation(&k));
    }

    #[test]
    fn two_mode_agrees_with_product_path() {
        let beam = InputBeam::new(C64::new(0.5, 0.0), C64::new(0.8, 0.0)).unwrap();
        let r = full_two_mode_moments(&beam, 0.2, 32).unwrap();
        let p = oracle_moments_at(&beam, 0.2, 32).unwrap();
        assert!(r.moments.max_relative_deviation(&p) < 1e-12);
        let k = stokes_moments(&beam, 0.2).unwrap();
        assert!(r.moments.max_relative_deviation(&k) < 1e-10);
    }

    #[test]
    fn two_mode_operator_identities() {
        let beam = InputBeam::from_intensities(1.0, 0.5, 0.3, 2.2).unwrap();
        let r = full_two_mode_moments(&beam, 0.15, 40).unwrap();
        assert!(r.commutator_defect < 1e-10, "{}", r.commutator_defect);
        assert!(r.casimir_defect < 1e-10, "{}", r.casimir_defect);
        assert!(r.edge_population < 1e-12);
        for j in 0..3 {
            assert!(r.commutators[j][j].norm() < 1e-14);
        }
    }

    #[test]
    fn two_mode_rejects_large_dimension() {
        let beam = InputBeam::phase_locked(1.0, 1.0).unwrap();
        assert!(full_two_mode_moments(&beam, 0.1, 65).is_err());
    }
}
