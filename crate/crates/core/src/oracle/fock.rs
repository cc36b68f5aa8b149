use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const DEFAULT_LEAK_TOL: f64 = 1e-10;

/// Single-mode ladder operators on a truncated Fock basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Identity,
    Number,
    Create,
    Annihilate,
}

impl Ladder {
    pub const ALL: [Ladder; 4] = [Ladder::Identity, Ladder::Number, Ladder::Create, Ladder::Annihilate];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn adjoint(self) -> Ladder {
        match self {
            Ladder::Create => Ladder::Annihilate,
            Ladder::Annihilate => Ladder::Create,
            other => other,
        }
    }

    /// Applies the truncated operator. `Create` drops the top level.
    pub fn apply(self, psi: &DVector<C64>) -> DVector<C64> {
        let d = psi.len();
        match self {
            Ladder::Identity => psi.clone(),
            Ladder::Number => DVector::from_fn(d, |n, _| psi[n] * n as f64),
            Ladder::Create => {
                DVector::from_fn(d, |n, _| if n == 0 { C64::new(0.0, 0.0) } else { psi[n - 1] * (n as f64).sqrt() })
            }
            Ladder::Annihilate => {
                DVector::from_fn(
                    d,
                    |n, _| {
                        if n + 1 == d {
                            C64::new(0.0, 0.0)
                        } else {
                            psi[n + 1] * ((n + 1) as f64).sqrt()
                        }
                    },
                )
            }
        }
    }
}

/// Truncated single-mode state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: DVector<C64>,
    norm_leakage: f64,
}

impl FockState {
    /// Wraps amplitudes; requires `dim >= 2` and a norm in `(1 - leak_tol, 1]`.
    pub fn new(amplitudes: DVector<C64>, leak_tol: f64) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::TruncationError(format!("dimension {} is below 2", amplitudes.len())));
        }
        let norm_sq = amplitudes.norm_squared();
        let norm_leakage = 1.0 - norm_sq;
        if norm_leakage >= leak_tol || norm_sq > 1.0 + 1e-12 {
            return Err(Error::TruncationError(format!(
                "norm leakage {norm_leakage:.3e} at dim {} exceeds {leak_tol:.1e}",
                amplitudes.len()
            )));
        }
        Ok(Self { amplitudes, norm_leakage })
    }

    pub(crate) fn unchecked(amplitudes: DVector<C64>) -> Self {
        let norm_leakage = 1.0 - amplitudes.norm_squared();
        Self { amplitudes, norm_leakage }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm_leakage(&self) -> f64 {
        self.norm_leakage
    }

    /// Population of the top `levels` Fock levels, a proxy for how close
    /// the state comes to the truncation edge.
    pub fn edge_population(&self, levels: usize) -> f64 {
        let d = self.dim();
        self.amplitudes.rows(d - levels.min(d), levels.min(d)).norm_squared()
    }

    /// `<psi| A |psi>` for a single ladder operator.
    pub fn expect(&self, op: Ladder) -> C64 {
        self.amplitudes.dotc(&op.apply(&self.amplitudes))
    }

    /// Normal-ordered moment `<a^dag^p a^q> = <a^p psi, a^q psi>`.
    pub fn normal_moment(&self, p: usize, q: usize) -> C64 {
        let lower = |k: usize| (0..k).fold(self.amplitudes.clone(), |v, _| Ladder::Annihilate.apply(&v));
        lower(p).dotc(&lower(q))
    }
}

/// Smallest truncation the coherent-state builder accepts:
/// `ceil(|alpha|^2 + 8 sqrt(|alpha|^2 + 1) + 20)`.
pub fn coherent_min_dim(intensity: f64) -> usize {
    (intensity + 8.0 * (intensity + 1.0).sqrt() + 20.0).ceil() as usize
}

/// Coherent amplitudes `e^{-|alpha|^2/2} alpha^n / sqrt(n!)` by recursion,
/// with no check on the truncation.
pub(crate) fn coherent_amplitudes(alpha: C64, dim: usize) -> DVector<C64> {
    let mut v = DVector::from_element(dim, C64::new(0.0, 0.0));
    let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            amp = amp * alpha / (n as f64).sqrt();
        }
        v[n] = amp;
    }
    v
}

/// Coherent state `|alpha>` truncated to `dim` levels.
pub fn build_coherent(alpha: C64, dim: usize) -> Result<FockState> {
    build_coherent_with(alpha, dim, DEFAULT_LEAK_TOL)
}

pub fn build_coherent_with(alpha: C64, dim: usize, leak_tol: f64) -> Result<FockState> {
    let min = coherent_min_dim(alpha.norm_sqr());
    if dim < min {
        return Err(Error::TruncationError(format!(
            "dim {dim} is below the minimum {min} for |alpha|^2 = {}",
            alpha.norm_sqr()
        )));
    }
    FockState::new(coherent_amplitudes(alpha, dim), leak_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_ground_state() {
        let s = build_coherent(C64::new(0.0, 0.0), 32).unwrap();
        assert_eq!(s.amplitudes()[0], C64::new(1.0, 0.0));
        assert!(s.amplitudes().iter().skip(1).all(|a| *a == C64::new(0.0, 0.0)));
    }

    #[test]
    fn coherent_photon_number() {
        let s = build_coherent(C64::new(2.0, 0.0), 64).unwrap();
        assert!((s.expect(Ladder::Number).re - 4.0).abs() < 1e-10);
        assert!(s.norm_leakage() < DEFAULT_LEAK_TOL);
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let (a, b) = (C64::new(1.2, -0.3), C64::new(-0.4, 0.9));
        let sa = build_coherent(a, 64).unwrap();
        let sb = build_coherent(b, 64).unwrap();
        let overlap = sa.amplitudes().dotc(sb.amplitudes());
        let expected = (-(a.norm_sqr() + b.norm_sqr()) / 2.0 + a.conj() * b).exp();
        assert!((overlap - expected).norm() < 1e-10);
    }

    #[test]
    fn normal_moments_of_coherent_state() {
        let a = C64::new(0.8, 0.5);
        let s = build_coherent(a, 48).unwrap();
        for (p, q) in [(0, 1), (1, 1), (2, 1), (2, 2), (0, 4)] {
            let expected = a.conj().powu(p as u32) * a.powu(q as u32);
            assert!((s.normal_moment(p, q) - expected).norm() < 1e-10, "({p},{q})");
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(build_coherent(C64::new(3.0, 0.0), 20), Err(Error::TruncationError(_))));
        assert!(FockState::new(DVector::from_element(1, C64::new(1.0, 0.0)), DEFAULT_LEAK_TOL).is_err());
    }

    #[test]
    fn ladder_adjoints() {
        let psi = coherent_amplitudes(C64::new(0.7, 0.2), 24);
        let phi = coherent_amplitudes(C64::new(-0.1, 0.5), 24);
        for op in Ladder::ALL {
            let lhs = phi.dotc(&op.apply(&psi));
            let rhs = op.adjoint().apply(&phi).dotc(&psi);
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }
}
