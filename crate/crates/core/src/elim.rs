//! Exact elimination over the rationals.
//!
//! Rows are first scaled to integers; fraction-free (Bareiss) elimination
//! then keeps every intermediate entry an integer minor, so the only
//! divisions are exact.

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rank::{RankMethodKind, RankReport};
use crate::scalar::{Rational, Scalar};

/// Each row multiplied by the lcm of its denominators. Returns the integer
/// rows and the multipliers.
fn integer_rows(a: &QMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(a.rows());
    let mut scales = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let lcm = a
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(
            a.row(i)
                .iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
        scales.push(lcm);
    }
    (rows, scales)
}

/// Fraction-free row echelon reduction in place. Pivot search takes the
/// first nonzero entry at or below the current row. Returns pivot columns.
fn bareiss_echelon(rows: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..pivot_row.len() {
                let num = &row[j] * &pivot - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn exact_rank(a: &QMatrix) -> RankReport {
    let (mut rows, _) = integer_rows(a);
    let rank = bareiss_echelon(&mut rows, a.cols()).len();
    RankReport {
        rank,
        method: RankMethodKind::ExactBareiss,
        tolerance: 0.0,
    }
}

/// Exact inverse: solves `(D A) X = D` with `D` the row-scaling diagonal,
/// by fraction-free forward elimination and rational back-substitution.
pub fn exact_inverse(a: &QMatrix) -> Result<QMatrix> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "inverse",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let (int_rows, scales) = integer_rows(a);
    let mut aug: Vec<Vec<BigInt>> = int_rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    scales[i].clone()
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = bareiss_echelon(&mut aug, 2 * n);
    // The scaling block has full rank, so a singular A pushes a pivot into it.
    if pivots.iter().take(n).enumerate().any(|(i, &c)| i != c) {
        return Err(Error::Singular {
            dim: n,
            report: exact_rank(a),
        });
    }
    let mut x = vec![vec![<Rational as Scalar>::zero(); n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(aug[i][n + col].clone());
            for k in i + 1..n {
                acc -= Rational::from_integer(aug[i][k].clone()) * &x[k][col];
            }
            x[i][col] = acc / Rational::from_integer(aug[i][i].clone());
        }
    }
    QMatrix::from_rows(&x)
}

/// Reduced row echelon form over the rationals, with pivot columns.
pub fn rref(a: &QMatrix) -> (QMatrix, Vec<usize>) {
    let (m, n) = a.shape();
    let mut rows: Vec<Vec<Rational>> = (0..m).map(|i| a.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !Scalar::is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = <Rational as Scalar>::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || Scalar::is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let data = rows.into_iter().flatten().collect();
    (QMatrix::from_vec(m, n, data).expect("shape preserved"), pivots)
}

/// Exact Moore-Penrose inverse through the rank factorization
/// `A = C R` (pivot columns of `A` times the nonzero rows of its RREF):
/// `A^- = R* (R R*)^-1 (C* C)^-1 C*`.
pub fn exact_pinv(a: &QMatrix) -> QMatrix {
    let (m, n) = a.shape();
    let (reduced, pivots) = rref(a);
    let r = pivots.len();
    if r == 0 {
        return QMatrix::zeros(n, m);
    }
    let c = a.select_columns(&pivots);
    let rr = reduced.submatrix(0, r, 0, n);
    let ct = c.transpose();
    let rt = rr.transpose();
    // Both Gram matrices are r x r of full rank by construction.
    let inner_r = exact_inverse(&(&rr * &rt)).expect("R R* is invertible");
    let inner_c = exact_inverse(&(&ct * &c)).expect("C* C is invertible");
    &(&(&rt * &inner_r) * &inner_c) * &ct
}
