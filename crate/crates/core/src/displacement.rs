//! The displacement operators
//!
//! * `∇_{Z,N} A = A - Z A N`
//! * `Δ_{Z,N} A = Z A - A N`
//!
//! together with displacement ranks, generators and the finite-sum inverse
//! of `∇` for a nilpotent displacement matrix.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{
    alternating_shift, cyclic_shift, reverse_identity, shift_matrix, FMatrix, Matrix,
};
use crate::rank::{rank_with, RankMethod, RankReport};
use crate::scalar::Scalar;
use crate::svd::svd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DisplacementKind {
    /// `A - Z A N`
    Nabla,
    /// `Z A - A N`
    Delta,
}

impl DisplacementKind {
    /// ASCII tag used in reports: `dN` or `dD`.
    pub fn tag(self) -> &'static str {
        match self {
            DisplacementKind::Nabla => "dN",
            DisplacementKind::Delta => "dD",
        }
    }
}

fn check_operands<T: Scalar>(
    op: &'static str,
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<()> {
    if !z.is_square() || z.rows() != a.rows() {
        return Err(Error::mismatch(op, z.shape(), a.shape()));
    }
    if !n.is_square() || n.rows() != a.cols() {
        return Err(Error::mismatch(op, a.shape(), n.shape()));
    }
    Ok(())
}

/// `A - Z A N`.
pub fn nabla<T: Scalar>(a: &Matrix<T>, z: &Matrix<T>, n: &Matrix<T>) -> Result<Matrix<T>> {
    check_operands("nabla", a, z, n)?;
    Ok(a - &(&(z * a) * n))
}

/// `Z A - A N`.
pub fn delta<T: Scalar>(a: &Matrix<T>, z: &Matrix<T>, n: &Matrix<T>) -> Result<Matrix<T>> {
    check_operands("delta", a, z, n)?;
    Ok(&(z * a) - &(a * n))
}

/// A displacement pattern `{Z, N}` with its operator kind.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementPattern<T: Scalar> {
    pub z: Matrix<T>,
    pub n: Matrix<T>,
    pub kind: DisplacementKind,
    /// Human-readable names of `Z` and `N`, e.g. `("S", "St")`.
    pub label: (String, String),
}

impl<T: Scalar> DisplacementPattern<T> {
    pub fn new(kind: DisplacementKind, z: Matrix<T>, n: Matrix<T>) -> Result<Self> {
        for m in [&z, &n] {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    op: "pattern",
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        Ok(DisplacementPattern {
            z,
            n,
            kind,
            label: ("Z".into(), "N".into()),
        })
    }

    pub fn with_label(mut self, z: &str, n: &str) -> Self {
        self.label = (z.to_string(), n.to_string());
        self
    }

    fn named(kind: DisplacementKind, z: Matrix<T>, n: Matrix<T>, lz: &str, ln: &str) -> Self {
        DisplacementPattern {
            z,
            n,
            kind,
            label: (lz.to_string(), ln.to_string()),
        }
    }

    /// `{S_m, S_n}`.
    pub fn shift_shift(kind: DisplacementKind, m: usize, n: usize) -> Self {
        Self::named(kind, shift_matrix(m), shift_matrix(n), "S", "S")
    }

    /// `{S_m, S_n*}`.
    pub fn shift_shift_t(kind: DisplacementKind, m: usize, n: usize) -> Self {
        Self::named(kind, shift_matrix(m), shift_matrix::<T>(n).transpose(), "S", "St")
    }

    /// `{S_m*, S_n}`.
    pub fn shift_t_shift(kind: DisplacementKind, m: usize, n: usize) -> Self {
        Self::named(kind, shift_matrix::<T>(m).transpose(), shift_matrix(n), "St", "S")
    }

    /// `{J_m, N}`.
    pub fn reverse(kind: DisplacementKind, m: usize, n: Matrix<T>) -> Result<Self> {
        Ok(Self::new(kind, reverse_identity(m), n)?.with_label("J", "N"))
    }

    /// `{S_m, C_n}` with `C_n` the cyclic up-shift.
    pub fn cyclic(kind: DisplacementKind, m: usize, n: usize) -> Self {
        Self::named(kind, shift_matrix(m), cyclic_shift(n), "S", "Cn")
    }

    /// `{Zalt, -Zalt*}` for square `n x n` matrices.
    pub fn alternating(kind: DisplacementKind, n: usize) -> Self {
        let z: Matrix<T> = alternating_shift(n);
        let minus_zt = -&z.transpose();
        Self::named(kind, z, minus_zt, "Zalt", "-ZaltT")
    }

    /// Applies the operator to `A`.
    pub fn apply(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        match self.kind {
            DisplacementKind::Nabla => nabla(a, &self.z, &self.n),
            DisplacementKind::Delta => delta(a, &self.z, &self.n),
        }
    }

    /// Swaps `Z` and `N`, keeping the kind.
    pub fn dual(&self) -> Self {
        DisplacementPattern {
            z: self.n.clone(),
            n: self.z.clone(),
            kind: self.kind,
            label: (self.label.1.clone(), self.label.0.clone()),
        }
    }

    pub fn to_f64(&self) -> DisplacementPattern<f64> {
        DisplacementPattern {
            z: self.z.to_f64(),
            n: self.n.to_f64(),
            kind: self.kind,
            label: self.label.clone(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> DisplacementPattern<U> {
        DisplacementPattern {
            z: self.z.cast(),
            n: self.n.cast(),
            kind: self.kind,
            label: self.label.clone(),
        }
    }
}

impl<T: Scalar> fmt::Display for DisplacementPattern<T> {
    /// `dN[S,St]` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            DisplacementKind::Nabla => "dN",
            DisplacementKind::Delta => "dD",
        };
        write!(f, "{tag}[{},{}]", self.label.0, self.label.1)
    }
}

/// Free-function form of [`DisplacementPattern::dual`].
pub fn dual_pattern<T: Scalar>(p: &DisplacementPattern<T>) -> DisplacementPattern<T> {
    p.dual()
}

/// Rank of the displaced matrix.
pub fn displacement_rank<T: Scalar>(
    a: &Matrix<T>,
    p: &DisplacementPattern<T>,
    method: RankMethod,
) -> Result<RankReport> {
    rank_with(&p.apply(a)?, method)
}

/// Low-rank factorization `left * core * right*` of a displaced matrix.
#[derive(Clone, Debug)]
pub struct Generator {
    /// `m x d`
    pub left: FMatrix,
    /// `d x d` diagonal
    pub core: FMatrix,
    /// `n x d`
    pub right: FMatrix,
    pub pattern: DisplacementPattern<f64>,
}

impl Generator {
    pub fn inner_dim(&self) -> usize {
        self.core.rows()
    }

    /// `left * core * right*`.
    pub fn displaced(&self) -> FMatrix {
        if self.inner_dim() == 0 {
            return FMatrix::zeros(self.left.rows(), self.right.rows());
        }
        &(&self.left * &self.core) * &self.right.transpose()
    }
}

/// Minimal generator: the SVD of the displaced matrix truncated at `tol`
/// (relative to the largest singular value).
pub fn generator_factorization(
    a: &FMatrix,
    p: &DisplacementPattern<f64>,
    tol: f64,
) -> Result<Generator> {
    let d = p.apply(a)?;
    let (m, n) = d.shape();
    let s = svd(&d)?;
    let r = s.rank(tol);
    Ok(Generator {
        left: s.u.submatrix(0, m, 0, r),
        core: FMatrix::diagonal(&s.sigma[..r]),
        right: s.v.submatrix(0, n, 0, r),
        pattern: p.clone(),
    })
}

/// The generator `[U ZU] Diag(Σ, -Σ) [V N*V]*` of `∇_{Z,N} A` built from
/// the rank-`r` SVD `A = U Σ V*`; its inner dimension is `2r`.
pub fn svd_generator(a: &FMatrix, z: &FMatrix, n: &FMatrix, tol: f64) -> Result<Generator> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "svd_generator",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    check_operands("svd_generator", a, z, n)?;
    let dim = a.rows();
    let s = svd(a)?;
    let r = s.rank(tol);
    let u = s.u.submatrix(0, dim, 0, r);
    let v = s.v.submatrix(0, dim, 0, r);
    let sigma = &s.sigma[..r];
    let mut diag = sigma.to_vec();
    diag.extend(sigma.iter().map(|x| -x));
    Ok(Generator {
        left: u.hstack(&(z * &u))?,
        core: FMatrix::diagonal(&diag),
        right: v.hstack(&(&n.transpose() * &v))?,
        pattern: DisplacementPattern::new(DisplacementKind::Nabla, z.clone(), n.clone())?,
    })
}

/// `Σ_{i=0..k} Z^i D N^i`. When `Z^{k+1} = 0` or `N^{k+1} = 0` and
/// `D = ∇_{Z,N} A`, the sum telescopes to `A`.
pub fn reconstruct_nabla<T: Scalar>(
    d: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
    k: usize,
) -> Result<Matrix<T>> {
    check_operands("reconstruct_nabla", d, z, n)?;
    if !z.pow(k + 1)?.is_zero() && !n.pow(k + 1)?.is_zero() {
        return Err(Error::NotNilpotent { power: k + 1 });
    }
    let mut term = d.clone();
    let mut sum = d.clone();
    for _ in 0..k {
        term = &(z * &term) * n;
        sum = &sum + &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QMatrix;
    use crate::rank::exact_rank;
    use crate::scalar::{ratio, Rational};
    use proptest::prelude::*;

    fn qmat(n: usize, m: usize, v: &[i64]) -> QMatrix {
        QMatrix::from_fn(n, m, |i, j| Rational::from_i64(v[(i * m + j) % v.len()]))
    }

    #[test]
    fn identity_has_unit_displacement_rank() {
        let p = DisplacementPattern::<Rational>::shift_shift_t(DisplacementKind::Nabla, 5, 5);
        let r = displacement_rank(&QMatrix::identity(5), &p, RankMethod::Exact).unwrap();
        assert_eq!(r.rank, 1);
        let r = displacement_rank(&QMatrix::identity(5), &p.dual(), RankMethod::Exact).unwrap();
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn zero_pattern_is_identity_map() {
        let a = qmat(3, 4, &[1, -2, 3, 5, 7]);
        let z = QMatrix::zeros(3, 3);
        let n = QMatrix::zeros(4, 4);
        assert_eq!(nabla(&a, &z, &n).unwrap(), a);
    }

    #[test]
    fn delta_of_identity_with_equal_pattern_vanishes() {
        let z: QMatrix = alternating_shift(4);
        assert!(delta(&QMatrix::identity(4), &z, &z).unwrap().is_zero());
    }

    #[test]
    fn dimension_errors() {
        let a = QMatrix::zeros(3, 4);
        let s3: QMatrix = shift_matrix(3);
        assert!(matches!(
            nabla(&a, &s3, &s3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(DisplacementPattern::new(DisplacementKind::Nabla, QMatrix::zeros(2, 3), s3).is_err());
    }

    #[test]
    fn dual_is_involution() {
        let p = DisplacementPattern::<Rational>::shift_shift_t(DisplacementKind::Nabla, 4, 4);
        let d = p.dual();
        assert_eq!(d.z, p.n);
        assert_eq!(d.label, ("St".to_string(), "S".to_string()));
        assert_eq!(d.dual(), p);
        assert_eq!(p.to_string(), "dN[S,St]");
    }

    #[test]
    fn not_nilpotent_is_rejected() {
        let c: QMatrix = cyclic_shift(3);
        let d = QMatrix::identity(3);
        let err = reconstruct_nabla(&d, &c, &c, 5).unwrap_err();
        assert!(err.to_string().contains("not invertible via this sum"));
        let zero = QMatrix::zeros(3, 3);
        assert_eq!(reconstruct_nabla(&d, &zero, &c, 0).unwrap(), d);
    }

    #[test]
    fn svd_generator_matches_nabla() {
        let u = [1.0, -2.0, 0.5, 3.0];
        let v = [2.0, 1.0, -1.0, 0.25];
        let a = FMatrix::from_fn(4, 4, |i, j| u[i] * v[j]);
        let s: FMatrix = shift_matrix(4);
        let g = svd_generator(&a, &s, &s.transpose(), 1e-8).unwrap();
        assert_eq!(g.inner_dim(), 2);
        let d = nabla(&a, &s, &s.transpose()).unwrap();
        assert!(g.displaced().distance(&d) <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn generator_of_zero_is_empty() {
        let p = DisplacementPattern::<f64>::shift_shift_t(DisplacementKind::Nabla, 3, 3);
        let g = generator_factorization(&FMatrix::zeros(3, 3), &p, 1e-8).unwrap();
        assert_eq!(g.inner_dim(), 0);
        assert!(g.displaced().is_zero());
    }

    fn int_matrix(max: usize) -> impl Strategy<Value = QMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(m, n)| {
            proptest::collection::vec(-9i64..=9, m * n)
                .prop_map(move |v| qmat(m, n, &v))
        })
    }

    proptest! {
        #[test]
        fn operators_are_linear(a in int_matrix(6), seed in -9i64..=9, c in -5i64..=5) {
            let (m, n) = a.shape();
            let b = QMatrix::from_fn(m, n, |i, j| Rational::from_i64((i as i64 * 3 - j as i64 + seed) % 7));
            let p = DisplacementPattern::<Rational>::shift_shift_t(DisplacementKind::Nabla, m, n);
            let q = DisplacementPattern::<Rational>::shift_t_shift(DisplacementKind::Delta, m, n);
            let c = ratio(c, 3);
            for pat in [&p, &q] {
                prop_assert_eq!(pat.apply(&(&a + &b)).unwrap(), &pat.apply(&a).unwrap() + &pat.apply(&b).unwrap());
                prop_assert_eq!(pat.apply(&a.scale(&c)).unwrap(), pat.apply(&a).unwrap().scale(&c));
            }
        }

        #[test]
        fn dual_consistency(a in int_matrix(6)) {
            // (∇_{Z,N} A)* = ∇_{N*,Z*} A* and (Δ_{Z,N} A)* = -Δ_{N*,Z*} A*.
            let (m, n) = a.shape();
            let z: QMatrix = alternating_shift(m);
            let nn: QMatrix = shift_matrix::<Rational>(n).transpose();
            let at = a.transpose();
            let (zt, nt) = (z.transpose(), nn.transpose());
            prop_assert_eq!(nabla(&at, &nt, &zt).unwrap(), nabla(&a, &z, &nn).unwrap().transpose());
            prop_assert_eq!(delta(&at, &nt, &zt).unwrap(), -&delta(&a, &z, &nn).unwrap().transpose());
            // With symmetric displacement matrices the dual operator is the
            // transpose of the primal one.
            let (j, i): (QMatrix, QMatrix) = (reverse_identity(m), QMatrix::identity(n));
            prop_assert_eq!(nabla(&at, &i, &j).unwrap(), nabla(&a, &j, &i).unwrap().transpose());
        }

        #[test]
        fn reconstruction_round_trip(a in int_matrix(8)) {
            let (m, n) = a.shape();
            let s: QMatrix = shift_matrix(m);
            let st: QMatrix = shift_matrix::<Rational>(n).transpose();
            let d = nabla(&a, &s, &st).unwrap();
            prop_assert_eq!(reconstruct_nabla(&d, &s, &st, m - 1).unwrap(), a);
        }

        #[test]
        fn exact_and_svd_displacement_ranks_agree(a in int_matrix(8)) {
            let (m, n) = a.shape();
            let p = DisplacementPattern::<Rational>::shift_shift(DisplacementKind::Delta, m, n);
            let exact = displacement_rank(&a, &p, RankMethod::Exact).unwrap().rank;
            let float = displacement_rank(&a.to_f64(), &p.to_f64(), RankMethod::Svd { tol: 1e-8 }).unwrap().rank;
            prop_assert_eq!(exact, float);
            prop_assert_eq!(exact, exact_rank(&p.apply(&a).unwrap()).rank);
        }

        #[test]
        fn minimal_generator_reconstructs(a in int_matrix(6)) {
            let (m, n) = a.shape();
            let af = a.to_f64();
            let p = DisplacementPattern::<f64>::shift_shift_t(DisplacementKind::Nabla, m, n);
            let g = generator_factorization(&af, &p, 1e-8).unwrap();
            let d = p.apply(&af).unwrap();
            prop_assert!(g.displaced().distance(&d) <= 1e-10 * (1.0 + d.frobenius_norm()));
            prop_assert_eq!(g.inner_dim(), exact_rank(&p.cast::<Rational>().apply(&a).unwrap()).rank);
        }
    }
}
