//! P-symmetric matrices: `P M P* = M*` for a fixed orthogonal `P`.
//!
//! Töplitz matrices are `J`-symmetric, Hankel matrices `I`-symmetric. The
//! class is closed under sums, products and (pseudo-)inversion, and the
//! pseudo-inverse of a P-symmetric matrix with `P Z P = N` satisfies
//! `δ∇_{N,Z}{A^-} <= 2 δ∇_{Z,N}{A}`. [`pinv_certificate`] builds the two
//! full-rank matrices `E1`, `E2` behind that bound.

use serde::Serialize;

use crate::displacement::nabla;
use crate::error::{Error, Result};
use crate::inverses::{moore_penrose, pinv};
use crate::matrix::{FMatrix, Matrix};
use crate::rank::numerical_rank;
use crate::scalar::Scalar;
use crate::subspace::{intersect, max_principal_sine, null_space, range_basis};
use crate::svd::svd;

/// Orthogonality slack per unit of dimension.
const ORTHO_TOL: f64 = 1e-12;

/// Largest `||P P* - I||_F` that [`pinv_certificate`] repairs by taking the
/// polar factor instead of rejecting `P`.
const REPAIRABLE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct PSymWitness {
    #[serde(skip)]
    pub p: FMatrix,
    /// `||P M P* - M*||_F`
    pub residual: f64,
    /// `residual <= tol * ||M||_F`
    pub is_member: bool,
    pub tol: f64,
}

fn orthogonality_residual<T: Scalar>(p: &Matrix<T>) -> Result<f64> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            op: "P",
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    Ok((&(p * &p.transpose()) - &Matrix::identity(p.rows())).frobenius_norm())
}

fn check_orthogonal<T: Scalar>(p: &Matrix<T>) -> Result<()> {
    let residual = orthogonality_residual(p)?;
    if residual > ORTHO_TOL * p.rows() as f64 {
        return Err(Error::NotOrthogonal { residual });
    }
    Ok(())
}

fn check_sizes<T: Scalar>(m: &Matrix<T>, p: &Matrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "P-symmetry",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if p.shape() != m.shape() {
        return Err(Error::mismatch("P-symmetry", p.shape(), m.shape()));
    }
    Ok(())
}

pub fn is_p_symmetric<T: Scalar>(m: &Matrix<T>, p: &Matrix<T>, tol: f64) -> Result<PSymWitness> {
    check_sizes(m, p)?;
    check_orthogonal(p)?;
    let residual = (&(&(p * m) * &p.transpose()) - &m.transpose()).frobenius_norm();
    Ok(PSymWitness {
        p: p.to_f64(),
        residual,
        is_member: residual <= tol * m.frobenius_norm(),
        tol,
    })
}

/// `P* M P = M*` at the same tolerance, for `M` already known to be
/// P-symmetric.
pub fn check_p_star_equivalence<T: Scalar>(m: &Matrix<T>, p: &Matrix<T>, tol: f64) -> Result<bool> {
    check_sizes(m, p)?;
    check_orthogonal(p)?;
    let residual = (&(&(&p.transpose() * m) * p) - &m.transpose()).frobenius_norm();
    Ok(residual <= tol * m.frobenius_norm())
}

/// One group of (numerically) equal singular values.
#[derive(Clone, Debug, Serialize)]
pub struct TripletCluster {
    pub sigma: f64,
    pub multiplicity: usize,
    /// Sine of the largest principal angle between `span(P V_c)` and
    /// `span(U_c)`.
    pub max_sine: f64,
    /// `||A P U_c - P V_c Σ_c||_F / sigma_max`
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub clusters: Vec<TripletCluster>,
    pub holds: bool,
    pub tol: f64,
}

/// For P-symmetric `A`, every singular triplet `{u, v, σ}` has a partner
/// `{P v, P u, σ}`. Checks this per cluster of equal singular values: the
/// left singular subspace must equal `P` times the right one, and
/// `A P u = σ P v` column by column. The zero cluster compares `Ker A*`
/// with `P Ker A`.
pub fn singular_triplet_pairing(a: &FMatrix, p: &FMatrix, tol: f64) -> Result<PairingReport> {
    check_sizes(a, p)?;
    check_orthogonal(p)?;
    let n = a.rows();
    let s = svd(a)?;
    let top = s.largest();
    let zero = tol * top;
    let mut clusters = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n {
            let gap = s.sigma[end - 1] - s.sigma[end];
            let both_zero = s.sigma[end - 1] <= zero && s.sigma[end] <= zero;
            if gap > tol * top && !both_zero {
                break;
            }
            end += 1;
        }
        let u = s.u.submatrix(0, n, start, end);
        let v = s.v.submatrix(0, n, start, end);
        let pu = p * &u;
        let pv = p * &v;
        let sig = FMatrix::diagonal(&s.sigma[start..end]);
        let residual = if top == 0.0 {
            0.0
        } else {
            (&(a * &pu) - &(&pv * &sig)).frobenius_norm() / top
        };
        let max_sine = max_principal_sine(&u, &pv)?.unwrap_or(1.0);
        clusters.push(TripletCluster {
            sigma: s.sigma[start],
            multiplicity: end - start,
            max_sine,
            residual,
        });
        start = end;
    }
    // Subspace angles are only as accurate as the gap to the neighbouring
    // clusters allows; 1e-6 leaves room for that at unit-scale gaps.
    let holds = clusters
        .iter()
        .all(|c| c.residual <= 1e-10 * n as f64 && c.max_sine <= 1e-6);
    Ok(PairingReport {
        clusters,
        holds,
        tol,
    })
}

/// P-symmetry of the pseudo-inverse (exact for rational input).
pub fn verify_pinv_p_symmetry<T: Scalar>(a: &Matrix<T>, p: &Matrix<T>, tol: f64) -> Result<PSymWitness> {
    check_sizes(a, p)?;
    let ap = moore_penrose(a)?;
    is_p_symmetric(&ap, p, tol)
}

/// The pair `E1`, `E2` with `E2* ∇_{N,Z}(A^-) E1 = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct PinvCertificate {
    #[serde(skip)]
    pub e1: FMatrix,
    #[serde(skip)]
    pub e2: FMatrix,
    /// `||E2* ∇_{N,Z}(A^-) E1||_F`
    pub residual: f64,
    /// `1 + ||∇_{N,Z}(A^-)||_F`
    pub scale: f64,
    /// `δ∇_{Z,N}{A}`
    pub delta: usize,
    pub n: usize,
    /// Width of `E1` and `E2`, equal to `n - delta`.
    pub width: usize,
    /// Smallest singular values of `E1`, `E2`.
    pub e1_min_sigma: f64,
    pub e2_min_sigma: f64,
    /// `||P - polar(P)||_F` when `P` had to be re-orthogonalized, else 0.
    pub p_perturbation: f64,
    /// `PZP = N` is only unambiguous for symmetric `P`; false flags the
    /// literal reading being applied to a non-symmetric `P`.
    pub p_symmetric: bool,
    /// `δ∇_{N,Z}{A^-}` measured at the same tolerance.
    pub pinv_delta: usize,
}

impl PinvCertificate {
    pub fn holds(&self, rel: f64) -> bool {
        self.residual <= rel * self.scale && self.width + self.delta == self.n
    }
}

/// Polar factor `U V*` of `P = U Σ V*`, the nearest orthogonal matrix.
fn polar(p: &FMatrix) -> Result<FMatrix> {
    let s = svd(p)?;
    Ok(&s.u * &s.v.transpose())
}

fn smallest_sigma(e: &FMatrix) -> Result<f64> {
    if e.cols() == 0 {
        return Ok(0.0);
    }
    Ok(*svd(e)?.sigma.last().unwrap_or(&0.0))
}

/// Builds `G1 = Ker ∇A`, `G2 = Ker (∇A)*`, `K1 = Ker AN ∩ G1`,
/// `K2 = Ker (ZA)* ∩ G2`, `V1 = range(A N G1)`, `V2 = range(A* Z* G2)` and
/// `E_i = [V_i, P K_i]`, then measures `E2* ∇_{N,Z}(A^-) E1`.
pub fn pinv_certificate(
    a: &FMatrix,
    p: &FMatrix,
    z: &FMatrix,
    n: &FMatrix,
    tol: f64,
) -> Result<PinvCertificate> {
    check_sizes(a, p)?;
    let dim = a.rows();
    if z.shape() != a.shape() || n.shape() != a.shape() {
        return Err(Error::mismatch("pinv_certificate", z.shape(), n.shape()));
    }
    let ortho = orthogonality_residual(p)?;
    let (p, p_perturbation) = if ortho <= ORTHO_TOL * dim as f64 {
        (p.clone(), 0.0)
    } else if ortho <= REPAIRABLE {
        let q = polar(p)?;
        let d = q.distance(p);
        (q, d)
    } else {
        return Err(Error::NotOrthogonal { residual: ortho });
    };
    let p_symmetric = p.distance(&p.transpose()) <= ORTHO_TOL * dim as f64;

    let pzp = &(&p * z) * &p;
    let hyp = pzp.distance(n);
    if hyp > tol * (1.0 + n.frobenius_norm()) {
        return Err(Error::HypothesisViolated {
            what: "PZP = N",
            residual: hyp,
        });
    }
    let sym = is_p_symmetric(a, &p, tol.max(ORTHO_TOL))?;
    if !sym.is_member {
        return Err(Error::HypothesisViolated {
            what: "P A P* = A*",
            residual: sym.residual,
        });
    }

    let d = nabla(a, z, n)?;
    let delta = numerical_rank(&d, tol)?.rank;
    let g1 = null_space(&d, tol)?;
    let g2 = null_space(&d.transpose(), tol)?;
    let k1 = intersect(&null_space(&(a * n), tol)?, &g1, tol)?;
    let k2 = intersect(&null_space(&(z * a).transpose(), tol)?, &g2, tol)?;
    let v1 = range_basis(&(&(a * n) * &g1), tol)?;
    let v2 = range_basis(&(&(&a.transpose() * &z.transpose()) * &g2), tol)?;
    let e1 = v1.hstack(&(&p * &k1))?;
    let e2 = v2.hstack(&(&p * &k2))?;

    let width = dim - delta;
    for (name, e) in [("E1", &e1), ("E2", &e2)] {
        if e.cols() != width {
            return Err(Error::DegenerateCertificate(format!(
                "{name} has {} columns, expected n - delta = {width}",
                e.cols()
            )));
        }
        let r = numerical_rank(e, tol)?.rank;
        if r != width {
            return Err(Error::DegenerateCertificate(format!(
                "{name} has rank {r} < {width}: V and P K overlap"
            )));
        }
    }

    let ap = pinv(a, tol)?;
    let dp = nabla(&ap, n, z)?;
    let residual = (&(&e2.transpose() * &dp) * &e1).frobenius_norm();
    Ok(PinvCertificate {
        residual,
        scale: 1.0 + dp.frobenius_norm(),
        delta,
        n: dim,
        width,
        e1_min_sigma: smallest_sigma(&e1)?,
        e2_min_sigma: smallest_sigma(&e2)?,
        p_perturbation,
        p_symmetric,
        pinv_delta: numerical_rank(&dp, tol)?.rank,
        e1,
        e2,
    })
}
