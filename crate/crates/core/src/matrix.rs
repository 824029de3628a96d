//! Dense row-major matrices over a [`Scalar`] backend, plus the displacement
//! matrices that recur everywhere: lower shift, reverse identity, cyclic
//! shift and the sign-alternating shift.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Dense matrix with immutable value semantics: every operation returns a
/// new matrix.
///
/// Zero-sized shapes are representable (a basis of a trivial subspace is an
/// `n x 0` matrix); the text format rejects them.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type FMatrix = Matrix<f64>;
pub type QMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::BadShape {
                    rows: rows.len(),
                    cols,
                    len: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Integer entries, handy for small hand-written examples.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let converted: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| T::from_i64(v)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::mismatch("matmul", self.shape(), other.shape()));
        }
        let mut data = vec![T::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let out = &mut data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    if !b.is_zero() {
                        *o = o.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::mismatch(op, self.shape(), other.shape()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Block-diagonal `self ⊕ other`; both operands must be square.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        for m in [self, other] {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    op: "direct_sum",
                    rows: m.rows,
                    cols: m.cols,
                });
            }
        }
        let n1 = self.rows;
        let n = n1 + other.rows;
        Ok(Self::from_fn(n, n, |i, j| match (i < n1, j < n1) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - n1, j - n1).clone(),
            _ => T::zero(),
        }))
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::mismatch("hstack", self.shape(), other.shape()));
        }
        let c1 = self.cols;
        Ok(Self::from_fn(self.rows, c1 + other.cols, |i, j| {
            if j < c1 {
                self.get(i, j).clone()
            } else {
                other.get(i, j - c1).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::mismatch("vstack", self.shape(), other.shape()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "pow",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> FMatrix {
        self.map(Scalar::to_f64)
    }

    pub fn to_exact(&self) -> QMatrix {
        self.map(Scalar::to_rational)
    }

    /// Converts between backends through the exact rational value.
    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        self.map(|v| U::from_rational(&v.to_rational()))
    }

    /// Frobenius norm, computed in `f64` for either backend.
    pub fn frobenius_norm(&self) -> f64 {
        let scale = self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let sum: f64 = self
            .data
            .iter()
            .map(|v| {
                let x = v.to_f64() / scale;
                x * x
            })
            .sum();
        scale * sum.sqrt()
    }
}

impl FMatrix {
    /// `||self - other||_F`; panics on shape mismatch.
    pub fn distance(&self, other: &FMatrix) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        let cols = self.cols;
        self.data[i * cols + j] = v;
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::format_entry).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on shape mismatch; the `checked_*` / `matmul`
// methods return errors instead.

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

/// Lower shift `S`: ones on the first subdiagonal; `S^n = 0`.
pub fn shift_matrix<T: Scalar>(n: usize) -> Matrix<T> {
    assert!(n >= 1, "shift_matrix needs n >= 1");
    Matrix::from_fn(n, n, |i, j| if i == j + 1 { T::one() } else { T::zero() })
}

/// Reverse identity `J`: ones on the anti-diagonal.
pub fn reverse_identity<T: Scalar>(n: usize) -> Matrix<T> {
    assert!(n >= 1, "reverse_identity needs n >= 1");
    Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { T::one() } else { T::zero() })
}

/// Cyclic up-shift: ones at `(i, i+1)` and at `(n-1, 0)`.
pub fn cyclic_shift<T: Scalar>(n: usize) -> Matrix<T> {
    assert!(n >= 1, "cyclic_shift needs n >= 1");
    Matrix::from_fn(n, n, |i, j| if j == (i + 1) % n { T::one() } else { T::zero() })
}

/// Subdiagonal `+1, -1, +1, ...` starting at entry `(1, 0)`.
pub fn alternating_shift<T: Scalar>(n: usize) -> Matrix<T> {
    assert!(n >= 1, "alternating_shift needs n >= 1");
    Matrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            if j % 2 == 0 {
                T::one()
            } else {
                -T::one()
            }
        } else {
            T::zero()
        }
    })
}
