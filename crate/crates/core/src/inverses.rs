//! Inverse, regularized inverse, Schur complement, Moore-Penrose
//! pseudo-inverse, full-rank rectangular pseudo-inverse and the block
//! inversion lemma for pseudo-inverses.

use serde::Serialize;

use crate::elim::exact_inverse;
pub use crate::elim::exact_pinv;
use crate::error::{Error, Result};
use crate::matrix::{FMatrix, Matrix};
use crate::rank::{numerical_rank, rank, DEFAULT_RANK_TOL};
use crate::scalar::Scalar;
use crate::svd::svd;

/// Inverse of a square matrix. Rational input is inverted exactly; float
/// input is rejected as singular when `sigma_min <= 1e-8 sigma_max`.
pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "inverse",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if T::EXACT {
        return Ok(exact_inverse(&a.to_exact())?.cast());
    }
    let af = a.to_f64();
    let report = numerical_rank(&af, DEFAULT_RANK_TOL)?;
    if report.rank < a.rows() {
        return Err(Error::Singular {
            dim: a.rows(),
            report,
        });
    }
    Ok(gauss_jordan(&af).cast())
}

/// Gauss-Jordan with partial pivoting on `[A | I]`; `A` is known regular.
fn gauss_jordan(a: &FMatrix) -> FMatrix {
    let n = a.rows();
    let mut w = a.hstack(&FMatrix::identity(n)).expect("same row count");
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| w.get(i, c).abs().total_cmp(&w.get(j, c).abs()))
            .expect("nonempty range");
        if p != c {
            for j in 0..2 * n {
                let (x, y) = (*w.get(c, j), *w.get(p, j));
                w.set(c, j, y);
                w.set(p, j, x);
            }
        }
        let pivot = *w.get(c, c);
        for j in 0..2 * n {
            let v = w.get(c, j) / pivot;
            w.set(c, j, v);
        }
        for i in (0..n).filter(|&i| i != c) {
            let f = *w.get(i, c);
            if f != 0.0 {
                for j in 0..2 * n {
                    let v = w.get(i, j) - f * w.get(c, j);
                    w.set(i, j, v);
                }
            }
        }
    }
    w.submatrix(0, n, n, 2 * n)
}

/// Moore-Penrose pseudo-inverse `V Σ^+ U*`, inverting the singular values
/// above `tol * sigma_max`.
pub fn pinv(a: &FMatrix, tol: f64) -> Result<FMatrix> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(FMatrix::zeros(n, m));
    }
    let s = svd(a)?;
    let r = s.rank(tol);
    Ok(FMatrix::from_fn(n, m, |i, j| {
        (0..r).map(|k| s.v.get(i, k) * s.u.get(j, k) / s.sigma[k]).sum()
    }))
}

/// Pseudo-inverse by the backend's natural route: exact rank factorization
/// for rationals, SVD at the default tolerance for floats.
pub fn moore_penrose<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if T::EXACT {
        Ok(exact_pinv(&a.to_exact()).cast())
    } else {
        Ok(pinv(&a.to_f64(), DEFAULT_RANK_TOL)?.cast())
    }
}

/// Frobenius norms of the four Penrose residuals:
/// `A B A - A`, `B A B - B`, `(A B)* - A B`, `(B A)* - B A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PenroseResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3).max(self.r4)
    }

    /// Conditions (i) and (ii) within `bound`.
    pub fn is_generalized_inverse(&self, bound: f64) -> bool {
        self.r1 <= bound && self.r2 <= bound
    }

    /// All four conditions within `bound`.
    pub fn is_moore_penrose(&self, bound: f64) -> bool {
        self.max() <= bound
    }
}

pub fn penrose_residuals<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<PenroseResiduals> {
    if b.shape() != (a.cols(), a.rows()) {
        return Err(Error::mismatch("penrose_residuals", a.shape(), b.shape()));
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok(PenroseResiduals {
        r1: (&(&ab * a) - a).frobenius_norm(),
        r2: (&(&ba * b) - b).frobenius_norm(),
        r3: (&ab.transpose() - &ab).frobenius_norm(),
        r4: (&ba.transpose() - &ba).frobenius_norm(),
    })
}

/// `1 + ||A||_F ||B||_F`, the scale the residuals are measured against.
pub fn penrose_scale<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> f64 {
    1.0 + a.frobenius_norm() * b.frobenius_norm()
}

/// `(A + eta I)^-1`.
pub fn regularized_inverse<T: Scalar>(a: &Matrix<T>, eta: &T) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "regularized_inverse",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let shifted = a + &Matrix::identity(a.rows()).scale(eta);
    inverse(&shifted).map_err(|e| match e {
        Error::Singular { .. } => Error::SingularShift {
            eta: eta.format_entry(),
        },
        other => other,
    })
}

/// Schur complement `D - C A^-1 B` of the leading `n1 x n1` block `A` of
/// `M = [[A, B], [C, D]]`.
pub fn schur_complement<T: Scalar>(m: &Matrix<T>, n1: usize) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "schur_complement",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n1 == 0 || n1 >= n {
        return Err(Error::InvalidArgument(format!(
            "leading block size {n1} must lie in 1..{n}"
        )));
    }
    let a = m.submatrix(0, n1, 0, n1);
    let b = m.submatrix(0, n1, n1, n);
    let c = m.submatrix(n1, n, 0, n1);
    let d = m.submatrix(n1, n, n1, n);
    let ainv = inverse(&a)?;
    Ok(&d - &(&(&c * &ainv) * &b))
}

/// `(A* A)^-1 A*` for `A` with full column rank.
pub fn full_rank_pinv<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let report = rank(a)?;
    if report.rank < a.cols() {
        return Err(Error::RankDeficient {
            op: "full_rank_pinv",
            expected: a.cols(),
            report,
        });
    }
    let at = a.transpose();
    Ok(&inverse(&(&at * a))? * &at)
}

/// The assembled block pseudo-inverse candidate with its residuals.
#[derive(Clone, Debug)]
pub struct BlockMp<T: Scalar> {
    /// `[[P, A2], [A1, 0]]`
    pub m: Matrix<T>,
    /// `[[Y, -P^-1 A2 X], [-X A1 P^-1, X]]`
    pub m_pinv: Matrix<T>,
    pub residuals: PenroseResiduals,
}

/// Block inversion lemma for `M = [[P, A2], [A1, 0]]` with `P` invertible:
/// `X = -(A1 P^-1 A2)^-` and `Y = P^-1 + P^-1 A2 X A1 P^-1`.
///
/// The candidate is returned together with its Penrose residuals; whether
/// it is the Moore-Penrose inverse is for the caller to judge.
pub fn block_mp_inverse<T: Scalar>(p: &Matrix<T>, a1: &Matrix<T>, a2: &Matrix<T>) -> Result<BlockMp<T>> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            op: "block_mp_inverse",
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let n = p.rows();
    if a1.cols() != n {
        return Err(Error::mismatch("block_mp_inverse", a1.shape(), p.shape()));
    }
    if a2.rows() != n {
        return Err(Error::mismatch("block_mp_inverse", p.shape(), a2.shape()));
    }
    let (r1, r2) = (rank(a1)?.rank, rank(a2)?.rank);
    if r1 != r2 {
        return Err(Error::RankMismatch {
            left: r1,
            right: r2,
        });
    }
    let p_inv = inverse(p)?;
    let x = -&moore_penrose(&(&(a1 * &p_inv) * a2))?;
    let pa2 = &p_inv * a2;
    let a1p = a1 * &p_inv;
    let y = &p_inv + &(&(&pa2 * &x) * &a1p);
    let top = y.hstack(&-&(&pa2 * &x))?;
    let bottom = (-&(&x * &a1p)).hstack(&x)?;
    let m_pinv = top.vstack(&bottom)?;
    let m = p
        .hstack(a2)?
        .vstack(&a1.hstack(&Matrix::zeros(a1.rows(), a2.cols()))?)?;
    let residuals = penrose_residuals(&m, &m_pinv)?;
    Ok(BlockMp {
        m,
        m_pinv,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QMatrix;
    use crate::scalar::{ratio, Rational};
    use crate::structured::{rng_from_seed, random_float_matrix, random_integer_matrix};
    use crate::subspace::range_basis;
    use proptest::prelude::*;

    #[test]
    fn small_inverses() {
        assert_eq!(inverse(&QMatrix::identity(3)).unwrap(), QMatrix::identity(3));
        let d = QMatrix::diagonal(&[ratio(2, 1), ratio(4, 1)]);
        assert_eq!(inverse(&d).unwrap(), QMatrix::diagonal(&[ratio(1, 2), ratio(1, 4)]));
        let f = FMatrix::diagonal(&[2.0, 4.0]);
        assert_eq!(inverse(&f).unwrap(), FMatrix::diagonal(&[0.5, 0.25]));
    }

    #[test]
    fn singular_inverse_reports_rank() {
        let a = FMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        match inverse(&a) {
            Err(Error::Singular { dim: 2, report }) => assert_eq!(report.rank, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn float_inverse_is_accurate() {
        let mut rng = rng_from_seed(5);
        for _ in 0..50 {
            let a = random_float_matrix(&mut rng, 6, 6);
            if let Ok(b) = inverse(&a) {
                let r = (&(&a * &b) - &FMatrix::identity(6)).frobenius_norm();
                assert!(r < 1e-9 * penrose_scale(&a, &b), "{r}");
            }
        }
    }

    #[test]
    fn penrose_of_scaled_identity() {
        let i = FMatrix::identity(3);
        let r = penrose_residuals(&i, &i.scale(&2.0)).unwrap();
        // I (2I) I - I = I
        assert!((r.r1 - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.r3, 0.0);
        assert!(penrose_residuals(&i, &FMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn pinv_of_identity_and_zero() {
        assert!(pinv(&FMatrix::identity(4), 1e-8).unwrap().distance(&FMatrix::identity(4)) < 1e-15);
        assert!(pinv(&FMatrix::zeros(3, 2), 1e-8).unwrap().is_zero());
    }

    #[test]
    fn generalized_inverse_is_not_moore_penrose() {
        // B = A^- + (I - A^- A) W keeps condition (i) but not (iv).
        let a = QMatrix::from_i64_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]).unwrap();
        let ap = exact_pinv(&a);
        let w = QMatrix::from_i64_rows(&[[1, 0, 2], [0, 1, 0], [3, 1, 1]]).unwrap();
        let proj = &QMatrix::identity(3) - &(&ap * &a);
        let b = &ap + &(&proj * &w);
        let r = penrose_residuals(&a, &b).unwrap();
        assert_eq!(r.r1, 0.0);
        assert!(r.r4 > 0.1);
        let exact = penrose_residuals(&a, &ap).unwrap();
        assert_eq!(exact.max(), 0.0);
    }

    #[test]
    fn regularized_inverse_of_singular_matrix() {
        let a = crate::structured::alternate_toeplitz_example();
        let r = regularized_inverse(&a, &Rational::from_i64(1)).unwrap();
        let shifted = &a + &QMatrix::identity(5);
        assert_eq!(&r * &shifted, QMatrix::identity(5));
        // eta = 0 on a singular matrix
        let err = regularized_inverse(&a, &Rational::from_i64(0)).unwrap_err();
        assert!(matches!(err, Error::SingularShift { .. }));
    }

    #[test]
    fn schur_of_block_diagonal() {
        assert_eq!(schur_complement(&QMatrix::identity(5), 2).unwrap(), QMatrix::identity(3));
        let a = QMatrix::from_i64_rows(&[[2, 1], [1, 1]]).unwrap();
        let d = QMatrix::from_i64_rows(&[[3, 4], [5, 6]]).unwrap();
        assert_eq!(schur_complement(&a.direct_sum(&d).unwrap(), 2).unwrap(), d);
        assert!(schur_complement(&QMatrix::identity(3), 3).is_err());
    }

    #[test]
    fn full_rank_pinv_of_orthonormal_columns() {
        let q = FMatrix::from_rows(&[vec![0.6, 0.0], vec![0.8, 0.0], vec![0.0, 1.0]]).unwrap();
        let b = full_rank_pinv(&q).unwrap();
        assert!(b.distance(&q.transpose()) < 1e-14);
        let deficient = QMatrix::from_i64_rows(&[[1, 2], [2, 4], [3, 6]]).unwrap();
        assert!(matches!(full_rank_pinv(&deficient), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn block_mp_full_rank_is_the_inverse() {
        let mut rng = rng_from_seed(9);
        let mut done = 0;
        while done < 20 {
            let p: QMatrix = random_integer_matrix(&mut rng, 3, 3);
            let a1: QMatrix = random_integer_matrix(&mut rng, 2, 3);
            let a2: QMatrix = random_integer_matrix(&mut rng, 3, 2);
            let Ok(b) = block_mp_inverse(&p, &a1, &a2) else { continue };
            let Ok(minv) = inverse(&b.m) else { continue };
            assert_eq!(b.m_pinv, minv);
            done += 1;
        }
    }

    #[test]
    fn block_mp_rank_one_against_oracle() {
        let p = FMatrix::identity(2);
        let a2 = FMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let a1 = a2.transpose();
        let b = block_mp_inverse(&p, &a1, &a2).unwrap();
        let scale = penrose_scale(&b.m, &b.m_pinv);
        assert!(b.residuals.is_generalized_inverse(1e-8 * scale));
        let oracle = pinv(&b.m, 1e-8).unwrap();
        assert!(oracle.distance(&b.m_pinv) < 1e-8 * scale);
    }

    #[test]
    fn block_mp_rejects_rank_mismatch() {
        let p = QMatrix::identity(2);
        let a1 = QMatrix::from_i64_rows(&[[1, 0], [0, 1]]).unwrap();
        let a2 = QMatrix::from_i64_rows(&[[1, 1], [1, 1]]).unwrap();
        assert!(matches!(
            block_mp_inverse(&p, &a1, &a2),
            Err(Error::RankMismatch { left: 2, right: 1 })
        ));
        let singular = QMatrix::zeros(2, 2);
        assert!(matches!(
            block_mp_inverse(&singular, &a1, &a1),
            Err(Error::Singular { .. })
        ));
    }

    fn low_rank(seed: u64, m: usize, n: usize, r: usize) -> QMatrix {
        let mut rng = rng_from_seed(seed);
        let f: QMatrix = random_integer_matrix(&mut rng, m, r);
        let g: QMatrix = random_integer_matrix(&mut rng, r, n);
        &f * &g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_inverse_duality_of_product(seed in any::<u64>(), n in 1usize..7) {
            let a: QMatrix = random_integer_matrix(&mut rng_from_seed(seed), n, n);
            if let Ok(b) = inverse(&a) {
                prop_assert_eq!(&a * &b, QMatrix::identity(n));
            }
        }

        #[test]
        fn float_pinv_agrees_with_exact(seed in any::<u64>(), m in 1usize..7, n in 1usize..7, r in 1usize..4) {
            let a = low_rank(seed, m, n, r.min(m).min(n));
            let af = a.to_f64();
            let exact = exact_pinv(&a);
            let b = pinv(&af, 1e-8).unwrap();
            let scale = penrose_scale(&af, &b);
            let s = svd(&af).unwrap();
            let rk = s.rank(1e-8);
            // Only well-conditioned instances have a stable pseudo-inverse.
            prop_assume!(rk == 0 || s.sigma[rk - 1] >= 1e-4 * s.sigma[0]);
            prop_assert!(penrose_residuals(&af, &b).unwrap().is_moore_penrose(1e-9 * scale));
            prop_assert!(b.distance(&exact.to_f64()) <= 1e-8 * scale);
            prop_assert_eq!(penrose_residuals(&a, &exact).unwrap().max(), 0.0);
        }

        #[test]
        fn pinv_range_is_range_of_transpose(seed in any::<u64>(), m in 2usize..7, n in 2usize..7) {
            let a = low_rank(seed, m, n, 2).to_f64();
            let b = pinv(&a, 1e-8).unwrap();
            let q = range_basis(&a.transpose(), 1e-8).unwrap();
            let proj = &q * &q.transpose();
            prop_assert!((&(&proj * &b) - &b).frobenius_norm() <= 1e-9 * (1.0 + b.frobenius_norm()));
        }
    }
}
