//! Rank by SVD threshold or by exact elimination.

use serde::{Deserialize, Serialize};

use crate::elim;
use crate::error::Result;
use crate::matrix::{FMatrix, Matrix, QMatrix};
use crate::scalar::Scalar;
use crate::svd::svd;

/// Singular values at or below this fraction of the largest are zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethodKind {
    SvdThreshold,
    ExactBareiss,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub method: RankMethodKind,
    /// Relative SVD threshold; 0 for the exact method.
    pub tolerance: f64,
}

/// How to decide a rank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RankMethod {
    /// Convert entries to rationals exactly, then eliminate.
    Exact,
    /// Count singular values above `tol * sigma_max`.
    Svd { tol: f64 },
}

impl RankMethod {
    /// Exact for rational matrices, SVD threshold at [`DEFAULT_RANK_TOL`]
    /// for floats.
    pub fn default_for<T: Scalar>() -> Self {
        if T::EXACT {
            RankMethod::Exact
        } else {
            RankMethod::Svd {
                tol: DEFAULT_RANK_TOL,
            }
        }
    }
}

pub fn numerical_rank(a: &FMatrix, tol: f64) -> Result<RankReport> {
    let rank = if a.rows() == 0 || a.cols() == 0 {
        0
    } else {
        svd(a)?.rank(tol)
    };
    Ok(RankReport {
        rank,
        method: RankMethodKind::SvdThreshold,
        tolerance: tol,
    })
}

/// Exact rank of any matrix; float entries are converted without rounding.
pub fn exact_rank<T: Scalar>(a: &Matrix<T>) -> RankReport {
    let q: QMatrix = a.to_exact();
    elim::exact_rank(&q)
}

pub fn rank_with<T: Scalar>(a: &Matrix<T>, method: RankMethod) -> Result<RankReport> {
    match method {
        RankMethod::Exact => Ok(exact_rank(a)),
        RankMethod::Svd { tol } => numerical_rank(&a.to_f64(), tol),
    }
}

/// Rank by the backend's default method.
pub fn rank<T: Scalar>(a: &Matrix<T>) -> Result<RankReport> {
    rank_with(a, RankMethod::default_for::<T>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::reverse_identity;
    use crate::scalar::Rational;

    #[test]
    fn identity_rank() {
        let r = numerical_rank(&FMatrix::identity(5), 1e-8).unwrap();
        assert_eq!(r.rank, 5);
        assert_eq!(r.method, RankMethodKind::SvdThreshold);
    }

    #[test]
    fn exact_reports_zero_tolerance() {
        let r = exact_rank(&reverse_identity::<Rational>(5));
        assert_eq!(r.rank, 5);
        assert_eq!(r.tolerance, 0.0);
        assert_eq!(r.method, RankMethodKind::ExactBareiss);
    }

    #[test]
    fn shift_rank_is_n_minus_one() {
        for n in 2..=8 {
            let s: FMatrix = crate::matrix::shift_matrix(n);
            assert_eq!(numerical_rank(&s, 1e-8).unwrap().rank, n - 1);
            assert_eq!(exact_rank(&s).rank, n - 1);
        }
    }

    #[test]
    fn default_method_follows_backend() {
        assert_eq!(RankMethod::default_for::<Rational>(), RankMethod::Exact);
        assert_eq!(
            RankMethod::default_for::<f64>(),
            RankMethod::Svd { tol: 1e-8 }
        );
    }
}
