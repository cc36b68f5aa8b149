//! First and second moments of the Stokes operators.

use serde::Serialize;

use crate::axis::Axis;

/// Means and covariance of `(S0, S1, S2, S3)` for one state.
///
/// `cov` is the symmetrized covariance `(<S_j S_k + S_k S_j>/2) - <S_j><S_k>`
/// of `(S1, S2, S3)`; its diagonal holds the variances `V1, V2, V3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesMoments {
    pub mean0: f64,
    pub mean0_sq: f64,
    pub mean: [f64; 3],
    pub cov: [[f64; 3]; 3],
}

/// One violated uncertainty relation `V_j V_k >= <S_l>^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyViolation {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub product: f64,
    pub bound: f64,
}

impl StokesMoments {
    pub fn zero() -> Self {
        Self { mean0: 0.0, mean0_sq: 0.0, mean: [0.0; 3], cov: [[0.0; 3]; 3] }
    }

    pub fn variances(&self) -> [f64; 3] {
        [self.cov[0][0], self.cov[1][1], self.cov[2][2]]
    }

    /// `V_n = n^T cov n`.
    pub fn variance_along(&self, n: &Axis) -> f64 {
        let n = n.components();
        let mut v = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                v += n[j] * self.cov[j][k] * n[k];
            }
        }
        v
    }

    pub fn mean_along(&self, n: &Axis) -> f64 {
        n.dot(&self.mean)
    }

    /// `|<S>|`, the length of the mean Stokes vector.
    pub fn mean_norm(&self) -> f64 {
        self.mean.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `<S0^2> - <S0>^2`.
    pub fn variance0(&self) -> f64 {
        self.mean0_sq - self.mean0 * self.mean0
    }

    /// `<S1^2 + S2^2 + S3^2>`.
    pub fn stokes_square_sum(&self) -> f64 {
        (0..3).map(|j| self.cov[j][j] + self.mean[j] * self.mean[j]).sum()
    }

    /// Checks `V_j V_k >= <S_l>^2 - tol * <S_l>^2` for every cyclic `(j, k, l)`.
    pub fn uncertainty_violations(&self, rel_tol: f64) -> Vec<UncertaintyViolation> {
        let v = self.variances();
        [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
            .into_iter()
            .filter_map(|(j, k, l)| {
                let product = v[j] * v[k];
                let bound = self.mean[l] * self.mean[l];
                (product < bound - rel_tol * bound).then_some(UncertaintyViolation { j, k, l, product, bound })
            })
            .collect()
    }

    /// Largest deviation between two moment sets, each entry measured
    /// relative to `max(|a|, |b|, 1 + <S0>)`. The floor is the shot-noise
    /// scale, so entries that vanish analytically are compared against the
    /// natural unit of Stokes fluctuations rather than against zero.
    pub fn max_relative_deviation(&self, other: &StokesMoments) -> f64 {
        let floor = 1.0 + self.mean0.abs().max(other.mean0.abs());
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(floor);
        let mut worst = rel(self.mean0, other.mean0).max(rel(self.mean0_sq, other.mean0_sq));
        for j in 0..3 {
            worst = worst.max(rel(self.mean[j], other.mean[j]));
            for k in 0..3 {
                worst = worst.max(rel(self.cov[j][k], other.cov[j][k]));
            }
        }
        worst
    }

    /// Same as [`max_relative_deviation`](Self::max_relative_deviation) but
    /// split into (means, covariance) parts.
    pub fn split_deviation(&self, other: &StokesMoments) -> (f64, f64) {
        let floor = 1.0 + self.mean0.abs().max(other.mean0.abs());
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(floor);
        let mut means = rel(self.mean0, other.mean0);
        let mut cov = rel(self.mean0_sq, other.mean0_sq);
        for j in 0..3 {
            means = means.max(rel(self.mean[j], other.mean[j]));
            for k in 0..3 {
                cov = cov.max(rel(self.cov[j][k], other.cov[j][k]));
            }
        }
        (means, cov)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..3).all(|j| (0..3).all(|k| (self.cov[j][k] - self.cov[k][j]).abs() <= tol))
    }
}
