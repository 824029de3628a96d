use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::checks::*;
use super::{drank, instance_digest, BoundCheck, Relation};
use crate::displacement::DisplacementKind::{self, Delta, Nabla};
use crate::error::{Error, Result};
use crate::inverses::inverse;
use crate::matrix::{
    alternating_shift, cyclic_shift, reverse_identity, shift_matrix, QMatrix,
};
use crate::rank::{exact_rank, numerical_rank, DEFAULT_RANK_TOL};
use crate::scalar::{Rational, Scalar};
use crate::structured::{
    alternate_toeplitz_example, block_th, circulant_example, random_hankel,
    random_integer_matrix, random_toeplitz, rank3_toeplitz_example, rank_deficient_hankel,
    rank_deficient_toeplitz, rng_from_seed,
};
use crate::svd::svd;

/// Inclusive range of random matrix sizes used when none is given.
pub const DEFAULT_SIZES: (usize, usize) = (4, 8);

pub const SUITES: [&str; 18] = [
    "all-paper-examples",
    "structure-bounds",
    "inverse-duality",
    "regularized",
    "schur",
    "products",
    "product-rect",
    "reconstruction",
    "penrose",
    "pinv-psym",
    "rank-pinv",
    "pinv-ht",
    "pinv-rect",
    "full-rank-pinv",
    "oracle-rank",
    "block-mp",
    "link-dn",
    "all",
];

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<BoundCheck>,
    /// Instance digests of failing checks, in check order.
    pub failures: Vec<String>,
    /// Largest left-hand side seen per check name, documenting the slack
    /// of each bound.
    pub observed_max: BTreeMap<String, usize>,
}

impl SuiteReport {
    fn new(suite: &str, trials: usize, seed: u64, checks: Vec<BoundCheck>) -> Self {
        let failures = checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.instance_digest.clone())
            .collect();
        let mut observed_max = BTreeMap::new();
        for c in &checks {
            let e = observed_max.entry(c.name.clone()).or_insert(0);
            *e = (*e).max(c.lhs);
        }
        SuiteReport {
            suite: suite.to_string(),
            trials,
            seed,
            checks,
            failures,
            observed_max,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Trial = fn(&mut ChaCha8Rng, usize, (usize, usize)) -> Result<Vec<BoundCheck>>;

fn trial_fn(name: &str) -> Option<Trial> {
    Some(match name {
        "structure-bounds" => structure_bounds,
        "inverse-duality" => inverse_duality,
        "regularized" => regularized,
        "schur" => schur,
        "products" => products,
        "product-rect" => product_rect,
        "reconstruction" => reconstruction,
        "penrose" => penrose,
        "pinv-psym" => pinv_psym,
        "rank-pinv" => rank_pinv,
        "pinv-ht" => pinv_ht,
        "pinv-rect" => pinv_rect,
        "full-rank-pinv" => full_rank_pinv,
        "oracle-rank" => oracle_rank,
        "block-mp" => block_mp,
        "link-dn" => link_dn,
        _ => return None,
    })
}

/// Runs `trials` independent instances of a named suite.
///
/// Trial `i` draws from its own generator seeded with
/// `seed + i * 0x9E3779B97F4A7C15`, so the report depends only on
/// `(name, trials, seed, sizes)` even though trials run in parallel.
/// `all-paper-examples` ignores the count beyond `trials = 0`.
pub fn run_suite(name: &str, trials: usize, seed: u64, sizes: (usize, usize)) -> Result<SuiteReport> {
    let (lo, hi) = sizes;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "size range {lo}..={hi} is empty or contains 0"
        )));
    }
    let checks = run_checks(name, trials, seed, sizes)?;
    Ok(SuiteReport::new(name, trials, seed, checks))
}

fn run_checks(name: &str, trials: usize, seed: u64, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    match name {
        "all" => {
            let mut out = Vec::new();
            for s in SUITES.iter().filter(|s| **s != "all") {
                out.extend(run_checks(s, trials, seed, sizes)?);
            }
            Ok(out)
        }
        "all-paper-examples" => {
            if trials == 0 {
                Ok(Vec::new())
            } else {
                paper_checks(seed)
            }
        }
        _ => {
            let f = trial_fn(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
            let per_trial: Vec<Result<Vec<BoundCheck>>> = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = rng_from_seed(seed.wrapping_add((i as u64).wrapping_mul(GOLDEN)));
                    f(&mut rng, i, sizes)
                })
                .collect();
            let mut out = Vec::new();
            for r in per_trial {
                out.extend(r?);
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// Instance generators. Everything is rational with small integer entries.

fn size(rng: &mut ChaCha8Rng, (lo, hi): (usize, usize)) -> usize {
    rng.gen_range(lo..=hi)
}

fn s(n: usize) -> QMatrix {
    shift_matrix(n)
}

fn st(n: usize) -> QMatrix {
    shift_matrix::<Rational>(n).transpose()
}

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn is_invertible(a: &QMatrix) -> bool {
    a.is_square() && exact_rank(a).rank == a.rows()
}

/// Draws until `accept` holds; small integer matrices are almost always
/// accepted within a few attempts.
fn draw<F, P>(rng: &mut ChaCha8Rng, mut make: F, accept: P) -> QMatrix
where
    F: FnMut(&mut ChaCha8Rng) -> QMatrix,
    P: Fn(&QMatrix) -> bool,
{
    loop {
        let a = make(rng);
        if accept(&a) {
            return a;
        }
    }
}

/// `m x n` matrix of exact rank `r` as a product of integer factors.
fn low_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> QMatrix {
    draw(
        rng,
        |g| {
            let f: QMatrix = random_integer_matrix(g, m, r);
            let h: QMatrix = random_integer_matrix(g, r, n);
            &f * &h
        },
        |a| exact_rank(a).rank == r,
    )
}

/// One of `S`, `S*`, `J`, `C`, `Zalt`, `I` at size `n`.
fn named_matrix(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    match rng.gen_range(0..6) {
        0 => s(n),
        1 => st(n),
        2 => reverse_identity(n),
        3 => cyclic_shift(n),
        4 => alternating_shift(n),
        _ => QMatrix::identity(n),
    }
}

fn structured_square(rng: &mut ChaCha8Rng, n: usize, which: usize) -> QMatrix {
    match which % 3 {
        0 => random_toeplitz(rng, n, n),
        1 => random_hankel(rng, n, n),
        _ => random_integer_matrix(rng, n, n),
    }
}

/// Rank-deficient Töplitz (with `P = J`, `Z = S`, `N = S*`) or Hankel
/// (with `P = I`, `Z = N = S`) of size in `sizes` and rank in `1..n`.
struct PsymInstance {
    a: QMatrix,
    p: QMatrix,
    z: QMatrix,
    n: QMatrix,
    family: Family,
}

fn psym_instance(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<PsymInstance> {
    let n = size(rng, (sizes.0.max(2), sizes.1.max(2)));
    let r = rng.gen_range(1..n);
    let seed: u64 = rng.gen();
    Ok(if trial % 2 == 0 {
        PsymInstance {
            a: rank_deficient_toeplitz(n, r, seed)?,
            p: reverse_identity(n),
            z: s(n),
            n: st(n),
            family: Family::Toeplitz,
        }
    } else {
        PsymInstance {
            a: rank_deficient_hankel(n, r, seed)?,
            p: QMatrix::identity(n),
            z: s(n),
            n: s(n),
            family: Family::Hankel,
        }
    })
}

// ---------------------------------------------------------------------------
// Trials.

fn bound2(name: &str, a: &QMatrix, kind: DisplacementKind, z: &QMatrix, n: &QMatrix) -> Result<BoundCheck> {
    let d = drank(kind, a, z, n)?;
    Ok(BoundCheck::new(name, d, Relation::Le, 2).digest(instance_digest(name, &[a])))
}

fn structure_bounds(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, n) = (size(rng, sizes), size(rng, sizes));
    let t: QMatrix = random_toeplitz(rng, m, n);
    let h: QMatrix = random_hankel(rng, m, n);
    Ok(vec![
        bound2("structure/toeplitz/dN[S,St]", &t, Nabla, &s(m), &st(n))?,
        bound2("structure/toeplitz/dD[S,S]", &t, Delta, &s(m), &s(n))?,
        bound2("structure/toeplitz/dN[St,S]", &t, Nabla, &st(m), &s(n))?,
        bound2("structure/hankel/dN[S,S]", &h, Nabla, &s(m), &s(n))?,
        bound2("structure/hankel/dD[S,St]", &h, Delta, &s(m), &st(n))?,
        bound2("structure/hankel/dD[St,S]", &h, Delta, &st(m), &s(n))?,
    ])
}

fn inverse_duality(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let n = size(rng, sizes);
    let a = draw(rng, |g| structured_square(g, n, trial), is_invertible);
    let mut out = Vec::new();
    for (z, nn) in [(s(n), st(n)), (s(n), s(n)), (st(n), s(n))] {
        out.extend(check_inverse_duality(&a, &z, &nn)?);
    }
    let (z, nn) = (named_matrix(rng, n), named_matrix(rng, n));
    out.extend(check_inverse_duality(&a, &z, &nn)?);
    Ok(out)
}

fn nonzero_eta(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(1..=5);
    q(if rng.gen_bool(0.5) { v } else { -v })
}

fn regularized(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let n = size(rng, sizes);
    let mut out = Vec::new();
    loop {
        let t: QMatrix = random_toeplitz(rng, n, n);
        let eta = nonzero_eta(rng);
        match check_regularized_toeplitz(&t, &eta) {
            Ok(c) => {
                out.extend(c);
                out.extend(check_regularized(&t, &s(n), &st(n), &eta)?);
                out.extend(check_regularized(&t, &s(n), &s(n), &eta)?);
                break;
            }
            Err(Error::SingularShift { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    loop {
        let a: QMatrix = random_integer_matrix(rng, n, n);
        let eta = nonzero_eta(rng);
        let z: QMatrix = alternating_shift(n);
        match check_regularized(&a, &z, &-&z.transpose(), &eta) {
            Ok(c) => {
                out.extend(c);
                break;
            }
            Err(Error::SingularShift { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn schur(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let n = size(rng, (sizes.0.max(2), sizes.1.max(2)));
    let k = rng.gen_range(1..n);
    let m = draw(
        rng,
        |g| {
            if trial % 2 == 0 {
                random_toeplitz(g, n, n)
            } else {
                random_integer_matrix(g, n, n)
            }
        },
        |m| is_invertible(m) && is_invertible(&m.submatrix(0, k, 0, k)),
    );
    let r = n - k;
    Ok(vec![
        check_schur(&m, &s(k), &st(k), &s(r), &st(r), Nabla)?,
        check_schur(&m, &s(k), &s(k), &s(r), &s(r), Delta)?,
        check_schur(&m, &named_matrix(rng, k), &named_matrix(rng, k), &named_matrix(rng, r), &named_matrix(rng, r), Nabla)?,
    ])
}

fn full_rank(a: &QMatrix) -> bool {
    exact_rank(a).rank == a.rows().min(a.cols())
}

fn products(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let n1 = size(rng, sizes);
    let n2 = size(rng, (n1, sizes.1.max(n1)));
    let t1 = draw(rng, |g| random_toeplitz(g, n1, n2), full_rank);
    let t2 = draw(rng, |g| random_toeplitz(g, n2, n1), full_rank);
    let h1 = draw(rng, |g| random_hankel(g, n1, n2), full_rank);
    let h2 = draw(rng, |g| random_hankel(g, n2, n1), full_rank);
    let mut out = Vec::new();
    for kind in [Delta, Nabla] {
        out.push(check_product_th(&t1, &t2, ProductFamily::TT, kind)?);
        out.push(check_product_th(&h1, &h2, ProductFamily::HH, kind)?);
        out.push(check_product_th(&t1, &h2, ProductFamily::TH, kind)?);
    }
    // The general theorem with arbitrary displacement matrices.
    let a1 = draw(rng, |g| random_integer_matrix(g, n1, n2), full_rank);
    let a2 = draw(rng, |g| random_integer_matrix(g, n2, n1), full_rank);
    let (z1, nn1, nn2, z2) = (
        named_matrix(rng, n1),
        named_matrix(rng, n2),
        named_matrix(rng, n2),
        named_matrix(rng, n1),
    );
    for kind in [Delta, Nabla] {
        out.push(check_product(&a1, &a2, &z1, &nn1, &nn2, &z2, kind)?);
        out.push(check_product(&t1, &t2, &s(n1), &s(n2), &s(n2), &s(n1), kind)?);
    }
    out.push(check_product_rect(&t1, &t2, &s(n1), &s(n2), &s(n2), &s(n1))?);
    out.push(check_product_rect(&h1, &h2, &s(n1), &st(n2), &st(n2), &s(n1))?);
    Ok(out)
}

fn product_rect(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, k, p) = (size(rng, sizes), size(rng, sizes), size(rng, sizes));
    let a: QMatrix = random_integer_matrix(rng, m, k);
    let b: QMatrix = random_integer_matrix(rng, k, p);
    let (za, na, zb, nb) = (
        named_matrix(rng, m),
        named_matrix(rng, k),
        named_matrix(rng, k),
        named_matrix(rng, p),
    );
    let mut out = vec![check_product_rect(&a, &b, &za, &na, &zb, &nb)?];
    let (z, n) = (named_matrix(rng, m), named_matrix(rng, k));
    let c: QMatrix = random_integer_matrix(rng, k, m);
    out.push(check_leibniz_dual(&a, &c, &z, &n)?);
    // AB = I: the dual-pattern displacement is null.
    let sq = draw(rng, |g| random_integer_matrix(g, m, m), is_invertible);
    let inv = inverse(&sq)?;
    let (z, n) = (named_matrix(rng, m), named_matrix(rng, m));
    out.push(check_leibniz_dual(&sq, &inv, &z, &n)?);
    Ok(out)
}

fn reconstruction(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, n) = (size(rng, sizes), size(rng, sizes));
    let a: QMatrix = random_integer_matrix(rng, m, n);
    Ok(vec![check_reconstruction(&a, &s(m), &st(n))?])
}

/// Rank-deficient integer matrix whose numerical rank at `1e-8` is
/// unambiguous: `sigma_r / sigma_1 >= 1e-4`.
fn well_separated_low_rank(rng: &mut ChaCha8Rng, sizes: (usize, usize)) -> Result<QMatrix> {
    let (lo, hi) = (sizes.0.max(2), sizes.1.max(2));
    loop {
        let (m, n) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
        let r = rng.gen_range(1..m.min(n));
        let a = low_rank(rng, m, n, r);
        let sv = svd(&a.to_f64())?;
        if sv.sigma[r - 1] >= 1e-4 * sv.largest() {
            return Ok(a);
        }
    }
}

fn penrose(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let a = well_separated_low_rank(rng, sizes)?;
    Ok(vec![check_penrose(&a)?])
}

fn pinv_psym(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let i = psym_instance(rng, trial, sizes)?;
    Ok(vec![check_pinv_psym(&i.a, &i.p, &i.z, &i.n)?])
}

fn rank_pinv(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let i = psym_instance(rng, trial, sizes)?;
    let mut out = vec![check_rank_pinv(&i.a, &i.z, &i.n)?];
    // Unstructured low-rank input exercises the `<= 2r` branch.
    let n = size(rng, (sizes.0.max(2), sizes.1.max(2)));
    let r = rng.gen_range(1..n);
    let a = low_rank(rng, n, n, r);
    out.push(check_rank_pinv(&a, &s(n), &st(n))?);
    Ok(out)
}

fn pinv_ht(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let i = psym_instance(rng, trial, sizes)?;
    Ok(check_pinv_ht(&i.a, i.family)?.to_vec())
}

fn tall_sizes(rng: &mut ChaCha8Rng, (lo, hi): (usize, usize)) -> (usize, usize) {
    let n = rng.gen_range(lo..=hi.max(lo + 1) - 1);
    let m = rng.gen_range(n + 1..=hi.max(n + 1));
    (m, n)
}

fn pinv_rect(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, n) = tall_sizes(rng, sizes);
    let a = if trial % 2 == 0 {
        random_toeplitz(rng, m, n)
    } else {
        // Leading columns of a square rank-deficient Töplitz matrix.
        let r = rng.gen_range(1..n.max(2));
        rank_deficient_toeplitz(m, r, rng.gen())?.submatrix(0, m, 0, n)
    };
    Ok(vec![check_pinv_rect(&a, &s(m), &s(n))?])
}

fn full_rank_pinv(rng: &mut ChaCha8Rng, _: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, n) = tall_sizes(rng, sizes);
    let a = draw(rng, |g| random_toeplitz(g, m, n), full_rank);
    Ok(check_full_rank_pinv(&a, &s(m), &s(n))?.to_vec())
}

fn oracle_rank(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, n) = (rng.gen_range(1..=sizes.1), rng.gen_range(1..=sizes.1));
    let a = if trial % 2 == 0 || m.min(n) == 1 {
        random_integer_matrix(rng, m, n)
    } else {
        let r = rng.gen_range(1..m.min(n));
        low_rank(rng, m, n, r)
    };
    Ok(vec![check_oracle_rank(&a)?])
}

fn block_mp(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let n = rng.gen_range(sizes.0.clamp(2, 4)..=sizes.1.clamp(2, 4));
    let p = draw(rng, |g| random_integer_matrix(g, n, n), is_invertible);
    let (a1, a2) = if trial % 2 == 0 {
        (
            draw(rng, |g| random_integer_matrix(g, n, n), is_invertible),
            draw(rng, |g| random_integer_matrix(g, n, n), is_invertible),
        )
    } else {
        // r < k keeps the Schur complement, and hence M, singular.
        let k = rng.gen_range(2..=n);
        let r = rng.gen_range(1..k);
        (low_rank(rng, k, n, r), low_rank(rng, n, k, r))
    };
    Ok(vec![check_block_mp(&p, &a1, &a2)?])
}

fn link_dn(rng: &mut ChaCha8Rng, trial: usize, sizes: (usize, usize)) -> Result<Vec<BoundCheck>> {
    let (m, n) = (size(rng, sizes), size(rng, sizes));
    let a = if trial % 2 == 0 {
        random_toeplitz(rng, m, n)
    } else {
        random_integer_matrix(rng, m, n)
    };
    let (z, nn) = (named_matrix(rng, m), named_matrix(rng, n));
    Ok(check_link_dn(&a, &z, &nn)?.to_vec())
}

// ---------------------------------------------------------------------------
// Worked examples.

fn rename(mut c: BoundCheck, name: &str) -> BoundCheck {
    c.name = name.to_string();
    c
}

fn value_check(name: &str, lhs: usize, expected: usize, a: &QMatrix) -> BoundCheck {
    BoundCheck::new(name, lhs, Relation::Eq, expected).digest(instance_digest(name, &[a]))
}

/// Displacement rank of the float pseudo-inverse at the default tolerance.
fn float_pinv_drank(a: &QMatrix, kind: DisplacementKind, z: &QMatrix, n: &QMatrix) -> Result<usize> {
    let ap = crate::inverses::pinv(&a.to_f64(), DEFAULT_RANK_TOL)?;
    let d = match kind {
        Nabla => crate::displacement::nabla(&ap, &z.to_f64(), &n.to_f64())?,
        Delta => crate::displacement::delta(&ap, &z.to_f64(), &n.to_f64())?,
    };
    Ok(numerical_rank(&d, DEFAULT_RANK_TOL)?.rank)
}

fn paper_checks(seed: u64) -> Result<Vec<BoundCheck>> {
    let mut out = Vec::new();

    // 3 x 4 circulant.
    let c = circulant_example([1, 2, 3, 4]);
    out.push(value_check("example/circulant/dN[S,Cn]", drank(Nabla, &c, &s(3), &cyclic_shift(4))?, 1, &c));
    out.push(value_check("example/circulant/dD[St,Cn]", drank(Delta, &c, &st(3), &cyclic_shift(4))?, 1, &c));
    for chk in check_link_dn(&c, &s(3), &cyclic_shift(4))? {
        let name = format!("example/circulant/{}", chk.name);
        out.push(rename(chk, &name));
    }

    // Link theorem: equality is attainable.
    let w = find_link_equality_witness(seed, 200_000)?.ok_or_else(|| {
        Error::InvalidArgument("no equality witness for the link bound".into())
    })?;
    let mut eq = w.check.clone();
    eq.relation = Relation::Eq;
    eq.holds = eq.lhs == eq.rhs;
    out.push(rename(eq.witness("search-trials", w.trials), "example/link-dn/equality"));

    // Identity facts.
    for n in [4, 5, 8] {
        let i = QMatrix::identity(n);
        out.push(value_check("example/identity/dN[S,St]", drank(Nabla, &i, &s(n), &st(n))?, 1, &i));
        out.push(value_check("example/identity/dN[St,S]", drank(Nabla, &i, &st(n), &s(n))?, 1, &i));
        for z in [s(n), reverse_identity(n), alternating_shift(n), cyclic_shift(n)] {
            out.push(value_check("example/identity/dD[Z,Z]", drank(Delta, &i, &z, &z)?, 0, &z));
        }
    }

    // Inverse duality on I and on a diagonal matrix.
    out.extend(check_inverse_duality(&QMatrix::identity(5), &s(5), &st(5))?);
    let d = QMatrix::diagonal(&[q(1), q(2), q(3), q(4), q(5)]);
    out.extend(check_inverse_duality(&d, &s(5), &s(5))?);

    // Alternate Töplitz.
    let a = alternate_toeplitz_example();
    let z: QMatrix = alternating_shift(5);
    let n = -&z.transpose();
    let zt = z.transpose();
    let j: QMatrix = reverse_identity(5);
    out.push(value_check("example/alternate-toeplitz/rank", exact_rank(&a).rank, 4, &a));
    out.push(value_check("example/alternate-toeplitz/dN[Z,N]", drank(Nabla, &a, &z, &n)?, 2, &a));
    out.push(value_check("example/alternate-toeplitz/dD[Z*,N]", drank(Delta, &a, &zt, &n)?, 2, &a));
    out.push(value_check(
        "example/alternate-toeplitz/dN[N,Z]{A^-}",
        float_pinv_drank(&a, Nabla, &n, &z)?,
        4,
        &a,
    ));
    out.push(value_check(
        "example/alternate-toeplitz/dD[N,Z*]{A^-}",
        float_pinv_drank(&a, Delta, &n, &zt)?,
        4,
        &a,
    ));
    let pp = check_pinv_psym(&a, &j, &z, &n)?;
    out.push(rename(
        BoundCheck { relation: Relation::Eq, holds: pp.lhs == pp.rhs, ..pp.clone() },
        "example/alternate-toeplitz/pinv-psym-tight",
    ));
    out.push(rename(pp, "example/alternate-toeplitz/pinv-psym"));
    out.push(rename(check_certificate(&a, &j, &z, &n)?, "example/alternate-toeplitz/certificate"));
    for chk in check_regularized(&a, &z, &n, &q(1))? {
        let name = format!("example/alternate-toeplitz/{}", chk.name);
        out.push(rename(chk, &name));
    }

    // Rank-3 Töplitz.
    let t = rank3_toeplitz_example();
    out.push(value_check("example/rank3-toeplitz/rank", exact_rank(&t).rank, 3, &t));
    out.push(value_check("example/rank3-toeplitz/dN[S,St]", drank(Nabla, &t, &s(5), &st(5))?, 2, &t));
    out.push(value_check(
        "example/rank3-toeplitz/dN[St,S]{A^-}",
        float_pinv_drank(&t, Nabla, &st(5), &s(5))?,
        4,
        &t,
    ));
    let pp = check_pinv_psym(&t, &j, &s(5), &st(5))?;
    out.push(rename(
        BoundCheck { relation: Relation::Eq, holds: pp.lhs == pp.rhs, ..pp.clone() },
        "example/rank3-toeplitz/pinv-psym-tight",
    ));
    out.push(rename(pp, "example/rank3-toeplitz/pinv-psym"));
    out.push(rename(check_rank_pinv(&t, &s(5), &st(5))?, "example/rank3-toeplitz/rank-pinv"));
    for chk in check_pinv_ht(&t, Family::Toeplitz)? {
        let name = format!("example/rank3-toeplitz/{}", chk.name);
        out.push(rename(chk, &name));
    }
    out.push(rename(check_certificate(&t, &j, &s(5), &st(5))?, "example/rank3-toeplitz/certificate"));
    for chk in check_regularized_toeplitz(&t, &q(1))? {
        let name = format!("example/rank3-toeplitz/{}", chk.name);
        out.push(rename(chk, &name));
    }

    let mut rng = rng_from_seed(seed);

    // Block [T H] with T 4 x 4 and H 4 x 3 under {S, S* ⊕ S}.
    let nt = st(4).direct_sum(&s(3))?;
    let tb: QMatrix = random_toeplitz(&mut rng, 4, 4);
    let hb: QMatrix = random_hankel(&mut rng, 4, 3);
    let blk = block_th(&tb, &hb)?;
    out.push(
        BoundCheck::new("example/block-th/dN", drank(Nabla, &blk, &s(4), &nt)?, Relation::Le, 3)
            .digest(instance_digest("block-th", &[&blk])),
    );

    // 8 x 8 Töplitz split 4 + 4.
    let m8 = draw(
        &mut rng,
        |g| random_toeplitz(g, 8, 8),
        |m| is_invertible(m) && is_invertible(&m.submatrix(0, 4, 0, 4)),
    );
    out.push(rename(check_schur(&m8, &s(4), &st(4), &s(4), &st(4), Nabla)?, "example/schur-8x8/nabla"));
    out.push(rename(check_schur(&m8, &s(4), &s(4), &s(4), &s(4), Delta)?, "example/schur-8x8/delta"));

    // Products of Töplitz and Hankel factors.
    let t1 = draw(&mut rng, |g| random_toeplitz(g, 5, 5), is_invertible);
    let t2 = draw(&mut rng, |g| random_toeplitz(g, 5, 5), is_invertible);
    let h1 = draw(&mut rng, |g| random_hankel(g, 5, 5), is_invertible);
    let h2 = draw(&mut rng, |g| random_hankel(g, 5, 5), is_invertible);
    for kind in [Delta, Nabla] {
        out.push(check_product_th(&t1, &t2, ProductFamily::TT, kind)?);
        out.push(check_product_th(&h1, &h2, ProductFamily::HH, kind)?);
        out.push(check_product_th(&t1, &h2, ProductFamily::TH, kind)?);
    }
    out.push(check_product_rect(&t1, &t2, &s(5), &s(5), &s(5), &s(5))?);
    out.push(rename(check_leibniz_dual(&t1, &inverse(&t1)?, &s(5), &st(5))?, "example/leibniz-dual/inverse"));

    // Tall 8 x 5 Töplitz: the first bound reads <= 6.
    let tall = draw(&mut rng, |g| random_toeplitz(g, 8, 5), full_rank);
    for chk in check_full_rank_pinv(&tall, &s(8), &s(5))? {
        let name = format!("example/tall-toeplitz/{}", chk.name);
        out.push(rename(chk, &name));
    }
    out.push(rename(check_pinv_rect(&tall, &s(8), &s(5))?, "example/tall-toeplitz/pinv-rect"));

    // Hankel pseudo-inverses: dD[St,S]{H^-} <= 5.
    let hk = rank_deficient_hankel(5, 3, seed)?;
    for chk in check_pinv_ht(&hk, Family::Hankel)? {
        let name = format!("example/hankel/{}", chk.name);
        out.push(rename(chk, &name));
    }
    let h1r = rank_deficient_hankel(5, 1, seed)?;
    out.push(rename(check_rank_pinv(&h1r, &s(5), &s(5))?, "example/rank1-hankel/rank-pinv"));

    // Invertible P-symmetric input: the bound reduces to duality.
    out.push(rename(check_pinv_psym(&t1, &reverse_identity(5), &s(5), &st(5))?, "example/invertible-toeplitz/pinv-psym"));

    Ok(out)
}
