use rand::Rng;

use super::{drank, instance_digest, BoundCheck, Relation};
use crate::displacement::{delta, nabla, reconstruct_nabla, DisplacementKind};
use crate::error::{Error, Result};
use crate::inverses::{
    block_mp_inverse, exact_pinv, full_rank_pinv, inverse, moore_penrose, penrose_residuals,
    penrose_scale, pinv, regularized_inverse, schur_complement,
};
use crate::matrix::{shift_matrix, FMatrix, Matrix, QMatrix};
use crate::psym::{is_p_symmetric, pinv_certificate};
use crate::rank::{exact_rank, numerical_rank, rank, DEFAULT_RANK_TOL};
use crate::scalar::{Rational, Scalar};
use crate::structured::{is_toeplitz, random_toeplitz, rng_from_seed};

use DisplacementKind::{Delta, Nabla};
use Relation::{Eq, Le, Lt};

/// Relative bound for float identities that hold exactly in theory.
const IDENTITY_TOL: f64 = 1e-12;

fn kind_name(kind: DisplacementKind) -> &'static str {
    match kind {
        Nabla => "nabla",
        Delta => "delta",
    }
}

/// Residual of an exact identity: the Frobenius norm, but never 0 for a
/// nonzero rational difference that would underflow.
fn identity_residual<T: Scalar>(diff: &Matrix<T>) -> f64 {
    let r = diff.frobenius_norm();
    if r == 0.0 && !diff.is_zero() {
        f64::MIN_POSITIVE
    } else {
        r
    }
}

fn identity_bound<T: Scalar>(scale: f64) -> f64 {
    if T::EXACT {
        0.0
    } else {
        IDENTITY_TOL * scale
    }
}

fn is_identity<T: Scalar>(m: &Matrix<T>) -> bool {
    if !m.is_square() {
        return false;
    }
    let d = m - &Matrix::identity(m.rows());
    if T::EXACT {
        d.is_zero()
    } else {
        d.frobenius_norm() <= IDENTITY_TOL * (1.0 + m.frobenius_norm())
    }
}

/// `δ∇_{Z,N}{A} <= δΔ_{Z*,N}{A} + δ∇_{Z,Z*}{I}` and
/// `δΔ_{Z,N}{A} <= δ∇_{Z*,N}{A} + δ∇_{Z,Z*}{I}`.
pub fn check_link_dn<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<[BoundCheck; 2]> {
    let zt = z.transpose();
    let di = drank(Nabla, &Matrix::identity(z.rows()), z, &zt)?;
    let dn = drank(Nabla, a, z, n)?;
    let dd = drank(Delta, a, z, n)?;
    let dd_t = drank(Delta, a, &zt, n)?;
    let dn_t = drank(Nabla, a, &zt, n)?;
    let digest = instance_digest("link-dn", &[a, z, n]);
    let w = [
        ("dN[Z,N]{A}", dn),
        ("dD[Z,N]{A}", dd),
        ("dD[Z*,N]{A}", dd_t),
        ("dN[Z*,N]{A}", dn_t),
        ("dN[Z,Z*]{I}", di),
    ];
    Ok([
        BoundCheck::new("link-dn/nabla", dn, Le, dd_t + di)
            .witnesses(w)
            .digest(digest.clone()),
        BoundCheck::new("link-dn/delta", dd, Le, dn_t + di)
            .witnesses(w)
            .digest(digest),
    ])
}

/// An instance where the first link bound is an equality with a nonzero
/// identity term.
#[derive(Clone, Debug)]
pub struct LinkWitness {
    pub a: QMatrix,
    pub z: QMatrix,
    pub n: QMatrix,
    pub check: BoundCheck,
    /// Number of candidates tried, this one included.
    pub trials: usize,
}

/// Searches random Töplitz `A` (sizes 3..=5), sparse 0/1 `Z` and
/// `N ∈ {S, S*}` for `δ∇_{Z,N}{A} = δΔ_{Z*,N}{A} + δ∇_{Z,Z*}{I}` with
/// both right-hand terms positive.
pub fn find_link_equality_witness(seed: u64, max_trials: usize) -> Result<Option<LinkWitness>> {
    let mut rng = rng_from_seed(seed);
    for trial in 1..=max_trials {
        let m = rng.gen_range(3..=5);
        let k = rng.gen_range(3..=5);
        let a: QMatrix = random_toeplitz(&mut rng, m, k);
        let z = QMatrix::from_fn(m, m, |_, _| {
            Rational::from_i64(i64::from(rng.gen_bool(0.3)))
        });
        let s: QMatrix = shift_matrix(k);
        let n = if rng.gen_bool(0.5) { s.transpose() } else { s };
        let [first, _] = check_link_dn(&a, &z, &n)?;
        if first.lhs == first.rhs && first.witnesses["dN[Z,Z*]{I}"] > 0 && first.witnesses["dD[Z*,N]{A}"] > 0
        {
            return Ok(Some(LinkWitness {
                a,
                z,
                n,
                check: first,
                trials: trial,
            }));
        }
    }
    Ok(None)
}

/// `δ_{Z,N}{A} = δ_{N,Z}{A^-1}` for both operators.
pub fn check_inverse_duality<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<[BoundCheck; 2]> {
    let ainv = inverse(a)?;
    let digest = instance_digest("inverse-duality", &[a, z, n]);
    let one = |kind: DisplacementKind| -> Result<BoundCheck> {
        let lhs = drank(kind, a, z, n)?;
        let rhs = drank(kind, &ainv, n, z)?;
        let t = kind.tag();
        Ok(
            BoundCheck::new(format!("inverse-duality/{}", kind_name(kind)), lhs, Eq, rhs)
                .witness(format!("{t}[Z,N]{{A}}"), lhs)
                .witness(format!("{t}[N,Z]{{A^-1}}"), rhs)
                .digest(digest.clone()),
        )
    };
    Ok([one(Delta)?, one(Nabla)?])
}

/// `δ_{N,Z}{R} <= δ_{Z,N}{A} + δ_{Z,N}{I}` for `R = (A + ηI)^-1`.
pub fn check_regularized<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
    eta: &T,
) -> Result<[BoundCheck; 2]> {
    let r = regularized_inverse(a, eta)?;
    let id = Matrix::identity(a.rows());
    let shifted = a + &id.scale(eta);
    let digest = instance_digest("regularized", &[a, z, n, &Matrix::diagonal(&[eta.clone()])]);
    let one = |kind: DisplacementKind| -> Result<BoundCheck> {
        let lhs = drank(kind, &r, n, z)?;
        let da = drank(kind, a, z, n)?;
        let di = drank(kind, &id, z, n)?;
        let ds = drank(kind, &shifted, z, n)?;
        let t = kind.tag();
        Ok(
            BoundCheck::new(format!("regularized/{}", kind_name(kind)), lhs, Le, da + di)
                .witness(format!("{t}[N,Z]{{R}}"), lhs)
                .witness(format!("{t}[Z,N]{{A}}"), da)
                .witness(format!("{t}[Z,N]{{I}}"), di)
                .witness(format!("{t}[Z,N]{{A+etaI}}"), ds)
                .digest(digest.clone()),
        )
    };
    Ok([one(Nabla)?, one(Delta)?])
}

/// Square Töplitz `T`: `δ∇_{S*,S}{R} = δ∇_{S,S*}{T + ηI}`, and
/// `= δ∇_{S,S*}{T}` as well when the off-diagonal parts of the first row
/// and of the first column are both nonzero.
pub fn check_regularized_toeplitz<T: Scalar>(t: &Matrix<T>, eta: &T) -> Result<Vec<BoundCheck>> {
    if !t.is_square() || !is_toeplitz(t) {
        return Err(Error::InvalidArgument(
            "expected a square Töplitz matrix".into(),
        ));
    }
    let dim = t.rows();
    let s: Matrix<T> = shift_matrix(dim);
    let st = s.transpose();
    let r = regularized_inverse(t, eta)?;
    let shifted = t + &Matrix::identity(dim).scale(eta);
    let lhs = drank(Nabla, &r, &st, &s)?;
    let d_shifted = drank(Nabla, &shifted, &s, &st)?;
    let d_plain = drank(Nabla, t, &s, &st)?;
    let digest = instance_digest("regularized-toeplitz", &[t, &Matrix::diagonal(&[eta.clone()])]);
    let w = [
        ("dN[St,S]{R}", lhs),
        ("dN[S,St]{T+etaI}", d_shifted),
        ("dN[S,St]{T}", d_plain),
    ];
    let mut out = vec![BoundCheck::new("regularized-toeplitz/shifted", lhs, Eq, d_shifted)
        .witnesses(w)
        .digest(digest.clone())];
    let row_nonzero = (1..dim).any(|j| !t.get(0, j).is_zero());
    let col_nonzero = (1..dim).any(|i| !t.get(i, 0).is_zero());
    if row_nonzero && col_nonzero {
        out.push(
            BoundCheck::new("regularized-toeplitz/plain", lhs, Eq, d_plain)
                .witnesses(w)
                .digest(digest),
        );
    }
    Ok(out)
}

/// `δ_{Z2,N2}{D - C A^-1 B} <= δ_{Z,N}{M}` for `M = [[A, B], [C, D]]` with
/// `A` of the size of `Z1` and the block-diagonal pattern
/// `{Z1 ⊕ Z2, N1 ⊕ N2}`.
pub fn check_schur<T: Scalar>(
    m: &Matrix<T>,
    z1: &Matrix<T>,
    n1: &Matrix<T>,
    z2: &Matrix<T>,
    n2: &Matrix<T>,
    kind: DisplacementKind,
) -> Result<BoundCheck> {
    let z = z1.direct_sum(z2)?;
    let n = n1.direct_sum(n2)?;
    let k = z1.rows();
    if n1.rows() != k {
        return Err(Error::mismatch("check_schur", z1.shape(), n1.shape()));
    }
    let schur = schur_complement(m, k)?;
    let lhs = drank(kind, &schur, z2, n2)?;
    let rhs = drank(kind, m, &z, &n)?;
    let t = kind.tag();
    Ok(BoundCheck::new(format!("schur/{}", kind_name(kind)), lhs, Le, rhs)
        .witness(format!("{t}[Z2,N2]{{Schur}}"), lhs)
        .witness(format!("{t}[Z,N]{{M}}"), rhs)
        .witness("n1", k)
        .digest(instance_digest("schur", &[m, &z, &n])))
}

/// `δ_{Z1,Z2}{A1 A2} <= δ_{Z1,N1}{A1} + δ_{N1,N2}{I} + δ_{N2,Z2}{A2}`.
pub fn check_product<T: Scalar>(
    a1: &Matrix<T>,
    a2: &Matrix<T>,
    z1: &Matrix<T>,
    n1: &Matrix<T>,
    n2: &Matrix<T>,
    z2: &Matrix<T>,
    kind: DisplacementKind,
) -> Result<BoundCheck> {
    let prod = a1.matmul(a2)?;
    let lhs = drank(kind, &prod, z1, z2)?;
    let d1 = drank(kind, a1, z1, n1)?;
    let di = drank(kind, &Matrix::identity(a1.cols()), n1, n2)?;
    let d2 = drank(kind, a2, n2, z2)?;
    let t = kind.tag();
    Ok(BoundCheck::new(format!("product/{}", kind_name(kind)), lhs, Le, d1 + di + d2)
        .witness(format!("{t}[Z1,Z2]{{A1A2}}"), lhs)
        .witness(format!("{t}[Z1,N1]{{A1}}"), d1)
        .witness(format!("{t}[N1,N2]{{I}}"), di)
        .witness(format!("{t}[N2,Z2]{{A2}}"), d2)
        .witness("rank{A1}", rank(a1)?.rank)
        .witness("rank{A2}", rank(a2)?.rank)
        .digest(instance_digest("product", &[a1, a2, z1, n1, n2, z2])))
}

/// Which two families a product is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductFamily {
    /// Töplitz times Töplitz.
    TT,
    /// Hankel times Hankel.
    HH,
    /// Töplitz times Hankel.
    TH,
}

impl ProductFamily {
    pub const ALL: [ProductFamily; 3] = [ProductFamily::TT, ProductFamily::HH, ProductFamily::TH];

    pub fn name(self) -> &'static str {
        match self {
            ProductFamily::TT => "TT",
            ProductFamily::HH => "HH",
            ProductFamily::TH => "TH",
        }
    }

    /// Pattern of the product: `(S, S)`, `(S, S)`, `(S, S*)` for Δ and
    /// `(S, S*)`, `(S, S*)`, `(S, S)` for ∇.
    fn transposes_n(self, kind: DisplacementKind) -> bool {
        matches!(
            (self, kind),
            (ProductFamily::TH, Delta) | (ProductFamily::TT, Nabla) | (ProductFamily::HH, Nabla)
        )
    }
}

/// The six bounds `δ{T1T2}, δ{H1H2}, δ{T1H2} <= 4` under their shift
/// patterns.
pub fn check_product_th<T: Scalar>(
    a1: &Matrix<T>,
    a2: &Matrix<T>,
    family: ProductFamily,
    kind: DisplacementKind,
) -> Result<BoundCheck> {
    let prod = a1.matmul(a2)?;
    let s: Matrix<T> = shift_matrix(prod.rows());
    let n = if family.transposes_n(kind) {
        s.transpose()
    } else {
        s.clone()
    };
    let lhs = drank(kind, &prod, &s, &n)?;
    Ok(BoundCheck::new(
        format!("product-th/{}/{}", family.name(), kind_name(kind)),
        lhs,
        Le,
        4,
    )
    .witness("rank{A1}", rank(a1)?.rank)
    .witness("rank{A2}", rank(a2)?.rank)
    .digest(instance_digest("product-th", &[a1, a2])))
}

/// `δΔ_{ZA,NB}{AB} <= δΔ_{ZA,NA}{A} + δΔ_{NA,ZB}{I} + δΔ_{ZB,NB}{B}`,
/// together with the identity
/// `Δ_{ZA,NB}(AB) = Δ_{ZA,NA}A·B + A·Δ_{NA,ZB}I·B + A·Δ_{ZB,NB}B`.
pub fn check_product_rect<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    za: &Matrix<T>,
    na: &Matrix<T>,
    zb: &Matrix<T>,
    nb: &Matrix<T>,
) -> Result<BoundCheck> {
    let ab = a.matmul(b)?;
    let d_ab = delta(&ab, za, nb)?;
    let da = delta(a, za, na)?;
    let di = delta(&Matrix::identity(a.cols()), na, zb)?;
    let db = delta(b, zb, nb)?;
    let rebuilt = &(&(&da * b) + &(&(a * &di) * b)) + &(a * &db);
    let diff = &d_ab - &rebuilt;
    let (na_, nb_, ni_) = (a.frobenius_norm(), b.frobenius_norm(), di.frobenius_norm());
    let scale = 1.0 + da.frobenius_norm() * nb_ + na_ * ni_ * nb_ + na_ * db.frobenius_norm();
    let (lhs, ra, ri, rb) = (
        rank(&d_ab)?.rank,
        rank(&da)?.rank,
        rank(&di)?.rank,
        rank(&db)?.rank,
    );
    Ok(BoundCheck::new("product-rect", lhs, Le, ra + ri + rb)
        .witness("dD[ZA,NB]{AB}", lhs)
        .witness("dD[ZA,NA]{A}", ra)
        .witness("dD[NA,ZB]{I}", ri)
        .witness("dD[ZB,NB]{B}", rb)
        .residual("leibniz", identity_residual(&diff), identity_bound::<T>(scale))
        .digest(instance_digest("product-rect", &[a, b, za, na, zb, nb])))
}

/// Dual patterns: `Δ_{Z,Z}(AB) = Δ_{Z,N}A·B + A·Δ_{N,Z}B`, and when
/// `AB = I` the right-hand side is null.
pub fn check_leibniz_dual<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<BoundCheck> {
    let ab = a.matmul(b)?;
    let lhs_m = delta(&ab, z, z)?;
    let da = delta(a, z, n)?;
    let db = delta(b, n, z)?;
    let rhs_m = &(&da * b) + &(a * &db);
    let diff = &lhs_m - &rhs_m;
    let scale =
        1.0 + da.frobenius_norm() * b.frobenius_norm() + a.frobenius_norm() * db.frobenius_norm();
    let (lhs, ra, rb) = (rank(&lhs_m)?.rank, rank(&da)?.rank, rank(&db)?.rank);
    let mut check = BoundCheck::new("leibniz-dual", lhs, Le, ra + rb)
        .witness("dD[Z,Z]{AB}", lhs)
        .witness("dD[Z,N]{A}", ra)
        .witness("dD[N,Z]{B}", rb)
        .residual("leibniz", identity_residual(&diff), identity_bound::<T>(scale));
    if is_identity(&ab) {
        check = check.residual("null", identity_residual(&rhs_m), identity_bound::<T>(scale));
    }
    Ok(check.digest(instance_digest("leibniz-dual", &[a, b, z, n])))
}

/// For `A` of full column rank and `B = (A*A)^-1 A*`:
/// `δΔ_{N,Z}{B} <= δΔ_{Z,N}{A} + 2 δΔ_{N,Z}{A*}` and
/// `δΔ_{N,Z*}{B} <= 3 δΔ_{Z,N}{A} + δΔ_{Z*,Z}{I}`.
pub fn check_full_rank_pinv<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<[BoundCheck; 2]> {
    let b = full_rank_pinv(a)?;
    let zt = z.transpose();
    let at = a.transpose();
    let d1 = drank(Delta, &b, n, z)?;
    let d2 = drank(Delta, &b, n, &zt)?;
    let da = drank(Delta, a, z, n)?;
    let dat = drank(Delta, &at, n, z)?;
    let di = drank(Delta, &Matrix::identity(a.rows()), &zt, z)?;
    let digest = instance_digest("full-rank-pinv", &[a, z, n]);
    let w = [
        ("dD[N,Z]{B}", d1),
        ("dD[N,Z*]{B}", d2),
        ("dD[Z,N]{A}", da),
        ("dD[N,Z]{A*}", dat),
        ("dD[Z*,Z]{I}", di),
    ];
    Ok([
        BoundCheck::new("full-rank-pinv/first", d1, Le, da + 2 * dat)
            .witnesses(w)
            .digest(digest.clone()),
        BoundCheck::new("full-rank-pinv/second", d2, Le, 3 * da + di)
            .witnesses(w)
            .digest(digest),
    ])
}

/// `δ∇_{N,Z}{A^-} <= 2 δ∇_{Z,N}{A}` for P-symmetric `A` with `PZP = N`.
pub fn check_pinv_psym<T: Scalar>(
    a: &Matrix<T>,
    p: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<BoundCheck> {
    let pzp = p.matmul(&z.matmul(p)?)?;
    if pzp.shape() != n.shape() {
        return Err(Error::mismatch("check_pinv_psym", pzp.shape(), n.shape()));
    }
    let hyp = identity_residual(&(&pzp - n));
    if hyp > identity_bound::<T>(1.0 + n.frobenius_norm()) {
        return Err(Error::HypothesisViolated {
            what: "PZP = N",
            residual: hyp,
        });
    }
    let tol = if T::EXACT { 0.0 } else { 1e-10 };
    let sym = is_p_symmetric(a, p, tol)?;
    if !sym.is_member {
        return Err(Error::HypothesisViolated {
            what: "P A P* = A*",
            residual: sym.residual,
        });
    }
    let ap = moore_penrose(a)?;
    let lhs = drank(Nabla, &ap, n, z)?;
    let d = drank(Nabla, a, z, n)?;
    Ok(BoundCheck::new("pinv-psym", lhs, Le, 2 * d)
        .witness("dN[N,Z]{A^-}", lhs)
        .witness("dN[Z,N]{A}", d)
        .witness("rank{A}", rank(a)?.rank)
        .digest(instance_digest("pinv-psym", &[a, p, z, n])))
}

/// `δ∇_{N,Z}{A^-} < 2r` when `δ∇_{Z,N}{A} < 2r`, else `<= 2r`, with `r`
/// the rank of `A`.
pub fn check_rank_pinv<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<BoundCheck> {
    let ap = moore_penrose(a)?;
    let r = rank(a)?.rank;
    let d = drank(Nabla, a, z, n)?;
    let lhs = drank(Nabla, &ap, n, z)?;
    let (name, rel) = if d < 2 * r {
        ("rank-pinv/strict", Lt)
    } else {
        ("rank-pinv/weak", Le)
    };
    Ok(BoundCheck::new(name, lhs, rel, 2 * r)
        .witness("dN[N,Z]{A^-}", lhs)
        .witness("dN[Z,N]{A}", d)
        .witness("rank{A}", r)
        .digest(instance_digest("rank-pinv", &[a, z, n])))
}

/// The structured family a square matrix is close to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Toeplitz,
    Hankel,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Toeplitz => "toeplitz",
            Family::Hankel => "hankel",
        }
    }
}

/// Töplitz: `δ∇_{S*,S}{T^-} <= 2 δ∇_{S,S*}{T}` and
/// `δΔ_{S,S}{T^-} <= 2 δΔ_{S,S}{T} + 1`.
/// Hankel: `δ∇_{S,S}{H^-} <= 2 δ∇_{S,S}{H}` and
/// `δΔ_{S*,S}{H^-} <= 2 δΔ_{S,S*}{H} + 1`.
pub fn check_pinv_ht<T: Scalar>(a: &Matrix<T>, family: Family) -> Result<[BoundCheck; 2]> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "check_pinv_ht",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let ap = moore_penrose(a)?;
    let s: Matrix<T> = shift_matrix(a.rows());
    let st = s.transpose();
    let digest = instance_digest("pinv-ht", &[a]);
    let r = rank(a)?.rank;
    let (nab_l, nab_r, del_l, del_r, keys) = match family {
        Family::Toeplitz => (
            drank(Nabla, &ap, &st, &s)?,
            drank(Nabla, a, &s, &st)?,
            drank(Delta, &ap, &s, &s)?,
            drank(Delta, a, &s, &s)?,
            ["dN[St,S]{A^-}", "dN[S,St]{A}", "dD[S,S]{A^-}", "dD[S,S]{A}"],
        ),
        Family::Hankel => (
            drank(Nabla, &ap, &s, &s)?,
            drank(Nabla, a, &s, &s)?,
            drank(Delta, &ap, &st, &s)?,
            drank(Delta, a, &s, &st)?,
            ["dN[S,S]{A^-}", "dN[S,S]{A}", "dD[St,S]{A^-}", "dD[S,St]{A}"],
        ),
    };
    let w = [
        (keys[0], nab_l),
        (keys[1], nab_r),
        (keys[2], del_l),
        (keys[3], del_r),
        ("rank{A}", r),
    ];
    let f = family.name();
    Ok([
        BoundCheck::new(format!("pinv-ht/{f}/nabla"), nab_l, Le, 2 * nab_r)
            .witnesses(w)
            .digest(digest.clone()),
        BoundCheck::new(format!("pinv-ht/{f}/delta"), del_l, Le, 2 * del_r + 1)
            .witnesses(w)
            .digest(digest),
    ])
}

/// Tall `A` (`m > n`):
/// `δΔ_{N,Z}{A^-} <= 3 δΔ_{N,Z}{A*} + 2 δΔ_{Z,N}{A} + 2 δ∇_{N,N*}{I_n}`.
pub fn check_pinv_rect<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<BoundCheck> {
    if a.rows() <= a.cols() {
        return Err(Error::InvalidArgument(format!(
            "expected a tall matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let ap = moore_penrose(a)?;
    let lhs = drank(Delta, &ap, n, z)?;
    let dat = drank(Delta, &a.transpose(), n, z)?;
    let da = drank(Delta, a, z, n)?;
    let di = drank(Nabla, &Matrix::identity(n.rows()), n, &n.transpose())?;
    Ok(BoundCheck::new("pinv-rect", lhs, Le, 3 * dat + 2 * da + 2 * di)
        .witness("dD[N,Z]{A^-}", lhs)
        .witness("dD[N,Z]{A*}", dat)
        .witness("dD[Z,N]{A}", da)
        .witness("dN[N,N*]{I}", di)
        .witness("rank{A}", rank(a)?.rank)
        .digest(instance_digest("pinv-rect", &[a, z, n])))
}

/// Float SVD pseudo-inverse against the four Penrose conditions at
/// `1e-9 (1 + ||A|| ||A^-||)` and against the exact pseudo-inverse at
/// `1e-8`.
pub fn check_penrose(a: &QMatrix) -> Result<BoundCheck> {
    let af = a.to_f64();
    let ap = pinv(&af, DEFAULT_RANK_TOL)?;
    let res = penrose_residuals(&af, &ap)?;
    let bound = 1e-9 * penrose_scale(&af, &ap);
    let exact = exact_pinv(a).to_f64();
    let lhs = numerical_rank(&ap, DEFAULT_RANK_TOL)?.rank;
    let rhs = exact_rank(a).rank;
    Ok(BoundCheck::new("penrose", lhs, Eq, rhs)
        .residual("(i)", res.r1, bound)
        .residual("(ii)", res.r2, bound)
        .residual("(iii)", res.r3, bound)
        .residual("(iv)", res.r4, bound)
        .residual("uniqueness", ap.distance(&exact), 1e-8)
        .digest(instance_digest("penrose", &[a])))
}

/// `Σ Z^i (∇_{Z,N} A) N^i` recovers `A`; `lhs` counts mismatching entries.
pub fn check_reconstruction<T: Scalar>(
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<BoundCheck> {
    let d = nabla(a, z, n)?;
    let k = a.rows().max(a.cols()).saturating_sub(1);
    let back = reconstruct_nabla(&d, z, n, k)?;
    let diff = &back - a;
    let mismatches = if T::EXACT {
        diff.data().iter().filter(|v| !v.is_zero()).count()
    } else {
        0
    };
    Ok(BoundCheck::new("reconstruction", mismatches, Eq, 0)
        .residual(
            "round-trip",
            identity_residual(&diff),
            identity_bound::<T>(1.0 + a.frobenius_norm()),
        )
        .digest(instance_digest("reconstruction", &[a, z, n])))
}

/// `numerical_rank(A, 1e-8) = exact_rank(A)`.
pub fn check_oracle_rank(a: &QMatrix) -> Result<BoundCheck> {
    let lhs = numerical_rank(&a.to_f64(), DEFAULT_RANK_TOL)?.rank;
    let rhs = exact_rank(a).rank;
    Ok(BoundCheck::new("oracle-rank", lhs, Eq, rhs).digest(instance_digest("oracle-rank", &[a])))
}

/// Block inversion lemma for `M = [[P, A2], [A1, 0]]`, computed in the
/// input's backend (exactly for rationals).
///
/// Invertible `M`: the assembled matrix must match `inverse(M)` within
/// `1e-9 (1 + ||M^-1||)`. Otherwise conditions (i) and (ii) must hold
/// within `1e-8 (1 + ||M|| ||M^-||)`; conditions (iii), (iv) and the
/// distance to the float SVD pseudo-inverse are recorded in `observed`.
pub fn check_block_mp<T: Scalar>(
    p: &Matrix<T>,
    a1: &Matrix<T>,
    a2: &Matrix<T>,
) -> Result<BoundCheck> {
    let bm = block_mp_inverse(p, a1, a2)?;
    let dim = bm.m.rows();
    let m_rank = rank(&bm.m)?.rank;
    let cand_rank = rank(&bm.m_pinv)?.rank;
    let cand = bm.m_pinv.to_f64();
    let check = BoundCheck::new("block-mp", cand_rank, Eq, m_rank)
        .witness("rank{A1}", rank(a1)?.rank)
        .witness("rank{A2}", rank(a2)?.rank)
        .witness("rank{A1 P^-1 A2}", rank(&(&(a1 * &inverse(p)?) * a2))?.rank)
        .witness("n", dim);
    let check = if m_rank == dim {
        let inv = inverse(&bm.m)?.to_f64();
        check.residual(
            "vs-inverse",
            cand.distance(&inv),
            1e-9 * (1.0 + inv.frobenius_norm()),
        )
    } else {
        let bound = 1e-8 * penrose_scale(&bm.m, &bm.m_pinv);
        let oracle: FMatrix = pinv(&bm.m.to_f64(), DEFAULT_RANK_TOL)?;
        check
            .residual("(i)", bm.residuals.r1, bound)
            .residual("(ii)", bm.residuals.r2, bound)
            .observe("(iii)", bm.residuals.r3)
            .observe("(iv)", bm.residuals.r4)
            .observe("vs-svd-pinv", cand.distance(&oracle))
    };
    Ok(check.digest(instance_digest("block-mp", &[p, a1, a2])))
}

/// Builds the `E1`, `E2` certificate and checks width `n - δ` and
/// `||E2* ∇_{N,Z}(A^-) E1||_F <= 1e-9 (1 + ||∇_{N,Z}(A^-)||_F)`.
pub fn check_certificate<T: Scalar>(
    a: &Matrix<T>,
    p: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<BoundCheck> {
    let cert = pinv_certificate(&a.to_f64(), &p.to_f64(), &z.to_f64(), &n.to_f64(), DEFAULT_RANK_TOL)?;
    Ok(
        BoundCheck::new("certificate", cert.width, Eq, cert.n - cert.delta)
            .witness("dN[Z,N]{A}", cert.delta)
            .witness("dN[N,Z]{A^-}", cert.pinv_delta)
            .witness("rank{E1}", numerical_rank(&cert.e1, DEFAULT_RANK_TOL)?.rank)
            .witness("rank{E2}", numerical_rank(&cert.e2, DEFAULT_RANK_TOL)?.rank)
            .residual("E2* dN(A^-) E1", cert.residual, 1e-9 * cert.scale)
            .observe("sigma_min{E1}", cert.e1_min_sigma)
            .observe("sigma_min{E2}", cert.e2_min_sigma)
            .digest(instance_digest("certificate", &[a, p, z, n])),
    )
}
