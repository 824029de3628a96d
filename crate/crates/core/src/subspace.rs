//! Orthonormal bases for kernels, ranges and intersections, and principal
//! angles between subspaces. Every rank decision uses a relative SVD
//! threshold.

use crate::error::Result;
use crate::matrix::FMatrix;
use crate::svd::svd;

/// Orthonormal basis (`n x k`) of `Ker A` for `A` of size `m x n`.
pub fn null_space(a: &FMatrix, tol: f64) -> Result<FMatrix> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(FMatrix::zeros(0, 0));
    }
    // Zero rows leave the kernel unchanged and give a full n x n V.
    let padded = if m < n {
        a.vstack(&FMatrix::zeros(n - m, n))?
    } else {
        a.clone()
    };
    let s = svd(&padded)?;
    let r = s.rank(tol);
    Ok(s.v.submatrix(0, n, r, n))
}

/// Orthonormal basis (`m x r`) of the column space of `A`.
pub fn range_basis(a: &FMatrix, tol: f64) -> Result<FMatrix> {
    let (m, n) = a.shape();
    if n == 0 || m == 0 {
        return Ok(FMatrix::zeros(m, 0));
    }
    let s = svd(a)?;
    let r = s.rank(tol);
    Ok(s.u.submatrix(0, m, 0, r))
}

/// Projector onto the orthogonal complement of the span of orthonormal `q`.
fn complement_projector(q: &FMatrix) -> FMatrix {
    let n = q.rows();
    &FMatrix::identity(n) - &(q * &q.transpose())
}

/// Orthonormal basis of `span(q1) ∩ span(q2)` for orthonormal bases
/// `q1`, `q2`: the kernel of the stacked complement projectors.
pub fn intersect(q1: &FMatrix, q2: &FMatrix, tol: f64) -> Result<FMatrix> {
    let n = q1.rows();
    if q1.cols() == 0 || q2.cols() == 0 {
        return Ok(FMatrix::zeros(n, 0));
    }
    let stacked = complement_projector(q1).vstack(&complement_projector(q2))?;
    // The projectors have unit-scale spectra; an all-zero stack means both
    // spans are the whole space.
    if stacked.max_abs() <= tol {
        return Ok(FMatrix::identity(n));
    }
    null_space_absolute(&stacked, tol)
}

/// Kernel using an absolute threshold (`sigma <= tol`), for unit-scale input.
fn null_space_absolute(a: &FMatrix, tol: f64) -> Result<FMatrix> {
    let n = a.cols();
    let padded = if a.rows() < n {
        a.vstack(&FMatrix::zeros(n - a.rows(), n))?
    } else {
        a.clone()
    };
    let s = svd(&padded)?;
    let r = s.sigma.iter().filter(|&&x| x > tol).count();
    Ok(s.v.submatrix(0, n, r, n))
}

/// Cosines of the principal angles between `span(q1)` and `span(q2)`,
/// descending. Both inputs must have orthonormal columns.
pub fn principal_cosines(q1: &FMatrix, q2: &FMatrix) -> Result<Vec<f64>> {
    if q1.cols() == 0 || q2.cols() == 0 {
        return Ok(Vec::new());
    }
    let m = q1.transpose().matmul(q2)?;
    Ok(svd(&m)?.sigma.into_iter().map(|c| c.min(1.0)).collect())
}

/// Sine of the largest principal angle between `span(q1)` and `span(q2)`
/// of equal dimension, as `||(I - Q1 Q1*) Q2||_2`; accurate for small
/// angles where the cosine route loses half the digits.
pub fn max_principal_sine(q1: &FMatrix, q2: &FMatrix) -> Result<Option<f64>> {
    if q1.cols() != q2.cols() || q1.rows() != q2.rows() {
        return Ok(None);
    }
    if q1.cols() == 0 {
        return Ok(Some(0.0));
    }
    let residual = complement_projector(q1).matmul(q2)?;
    Ok(Some(svd(&residual)?.largest().min(1.0)))
}

/// Largest principal angle (radians) between two subspaces of equal
/// dimension; `None` when dimensions differ.
pub fn max_principal_angle(q1: &FMatrix, q2: &FMatrix) -> Result<Option<f64>> {
    Ok(max_principal_sine(q1, q2)?.map(f64::asin))
}

/// Modified Gram-Schmidt with re-orthogonalization; drops columns whose
/// residual falls below `tol` times their original norm.
pub fn orthonormalize(a: &FMatrix, tol: f64) -> FMatrix {
    let m = a.rows();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for j in 0..a.cols() {
        let mut x = a.column(j);
        let norm0 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for b in &basis {
                let p: f64 = x.iter().zip(b).map(|(u, v)| u * v).sum();
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= p * bi;
                }
            }
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > tol * norm0 {
            basis.push(x.into_iter().map(|v| v / norm).collect());
        }
    }
    FMatrix::from_fn(m, basis.len(), |i, j| basis[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> FMatrix {
        FMatrix::from_fn(v.len(), 1, |i, _| v[i])
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let a = FMatrix::from_rows(&[vec![1.0, 1.0, 0.0]]).unwrap();
        let k = null_space(&a, 1e-8).unwrap();
        assert_eq!(k.shape(), (3, 2));
        assert!((&a * &k).max_abs() < 1e-14);
    }

    #[test]
    fn kernel_of_full_rank_is_empty() {
        let k = null_space(&FMatrix::identity(4), 1e-8).unwrap();
        assert_eq!(k.shape(), (4, 0));
        let k = null_space(&FMatrix::zeros(3, 3), 1e-8).unwrap();
        assert_eq!(k.cols(), 3);
    }

    #[test]
    fn intersection_of_planes_is_a_line() {
        let p1 = orthonormalize(
            &FMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap(),
            1e-12,
        );
        let p2 = orthonormalize(
            &FMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            1e-12,
        );
        let line = intersect(&p1, &p2, 1e-8).unwrap();
        assert_eq!(line.cols(), 1);
        assert!((line.get(0, 0).abs() - 1.0).abs() < 1e-12);
        let none = intersect(&col(&[0.0, 1.0, 0.0]), &col(&[0.0, 0.0, 1.0]), 1e-8).unwrap();
        assert_eq!(none.cols(), 0);
    }

    #[test]
    fn principal_angles() {
        let a = col(&[1.0, 0.0]);
        let b = orthonormalize(&col(&[1.0, 1.0]), 1e-12);
        let angle = max_principal_angle(&a, &b).unwrap().unwrap();
        assert!((angle - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert_eq!(max_principal_angle(&a, &FMatrix::identity(2)).unwrap(), None);
        let cos = principal_cosines(&a, &b).unwrap();
        assert!((cos[0] - 0.5f64.sqrt()).abs() < 1e-15);
        let tiny = orthonormalize(&col(&[1.0, 1e-12]), 1e-12);
        let s = max_principal_sine(&a, &tiny).unwrap().unwrap();
        assert!((s - 1e-12).abs() < 1e-20);
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let a = FMatrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![1.0, 2.0, 1.0]]).unwrap();
        let q = orthonormalize(&a, 1e-10);
        assert_eq!(q.cols(), 2);
        let g = &q.transpose() * &q;
        assert!(g.distance(&FMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn range_of_rank_one() {
        let a = FMatrix::from_fn(3, 3, |i, j| ((i + 1) * (j + 1)) as f64);
        let r = range_basis(&a, 1e-8).unwrap();
        assert_eq!(r.cols(), 1);
    }
}
