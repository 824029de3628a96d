//! One-sided (Hestenes) Jacobi SVD for small dense matrices.
//!
//! Columns of a working copy are rotated pairwise until mutually orthogonal;
//! the accumulated rotations form `V`, the column norms are the singular
//! values and the normalized columns form `U`.

use crate::error::{Error, Result};
use crate::matrix::FMatrix;

pub const MAX_SWEEPS: usize = 60;

/// Columns whose norm falls below this fraction of the largest one are
/// treated as numerically zero when building `U`.
const NEGLIGIBLE_COLUMN: f64 = 1e-13;

/// Thin SVD `A = U diag(sigma) V*` with `r = min(m, n)`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `m x r`, orthonormal columns.
    pub u: FMatrix,
    /// Non-negative, non-increasing, length `r`.
    pub sigma: Vec<f64>,
    /// `n x r`, orthonormal columns.
    pub v: FMatrix,
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `tol * sigma[0]`.
    pub fn rank(&self, tol: f64) -> usize {
        let top = self.largest();
        if top == 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > tol * top).count()
    }

    pub fn reconstruct(&self) -> FMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        FMatrix::from_fn(m, n, |i, j| {
            self.sigma
                .iter()
                .enumerate()
                .map(|(k, s)| self.u.get(i, k) * s * self.v.get(j, k))
                .sum()
        })
    }
}

pub fn svd(a: &FMatrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.transpose())?;
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    svd_tall(a)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (p, q) = (*a, *b);
        *a = c * p - s * q;
        *b = s * p + c * q;
    }
}

/// Requires `m >= n`.
fn svd_tall(a: &FMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let rel_tol = (m as f64 * f64::EPSILON).max(1e-15);
    let abs_floor = (1e-15 * a.frobenius_norm()).powi(2);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= abs_floor || gamma.abs() <= rel_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
                let (left, right) = vcols.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let top = sigma.first().copied().unwrap_or(0.0);

    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (slot, &k) in order.iter().enumerate() {
        if top > 0.0 && norms[k] > NEGLIGIBLE_COLUMN * top {
            ucols.push(cols[k].iter().map(|x| x / norms[k]).collect());
        } else {
            ucols.push(vec![0.0; m]);
            pending.push(slot);
        }
    }
    complete_orthonormal(&mut ucols, &pending, m);

    let u = FMatrix::from_fn(m, n, |i, j| ucols[j][i]);
    let v = FMatrix::from_fn(n, n, |i, j| vcols[order[j]][i]);
    Ok(Svd { u, sigma, v })
}

/// Fills the columns listed in `pending` with unit vectors orthogonal to
/// every other column, drawing candidates from the standard basis.
fn complete_orthonormal(cols: &mut [Vec<f64>], pending: &[usize], m: usize) {
    for &slot in pending {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = 0.0;
        for e in 0..m {
            let mut x = vec![0.0; m];
            x[e] = 1.0;
            // Two passes of modified Gram-Schmidt.
            for _ in 0..2 {
                for (k, c) in cols.iter().enumerate() {
                    // Unfilled pending columns are still zero and drop out.
                    if k == slot {
                        continue;
                    }
                    let proj = dot(&x, c);
                    for (xi, ci) in x.iter_mut().zip(c) {
                        *xi -= proj * ci;
                    }
                }
            }
            let norm = dot(&x, &x).sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = Some(x);
            }
            if norm > 0.5 {
                break;
            }
        }
        let x = best.expect("orthogonal complement is non-empty");
        cols[slot] = x.iter().map(|v| v / best_norm).collect();
    }
}
