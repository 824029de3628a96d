//! Töplitz, Hankel, circulant and block builders, seeded random families,
//! and the fixed worked examples.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::displacement::{DisplacementKind, DisplacementPattern};
use crate::error::{Error, Result};
use crate::matrix::{alternating_shift, cyclic_shift, reverse_identity, shift_matrix, Matrix, QMatrix};
use crate::rank::exact_rank;
use crate::scalar::{ratio, Rational, Scalar};

/// Deterministic RNG used by every random builder.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonempty<T>(v: &[T], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} must not be empty")));
    }
    Ok(())
}

/// `A[i][j] = first_col[i - j]` below the diagonal, `first_row[j - i]` above.
pub fn toeplitz<T: Scalar>(first_col: &[T], first_row: &[T]) -> Result<Matrix<T>> {
    nonempty(first_col, "first column")?;
    nonempty(first_row, "first row")?;
    if first_col[0] != first_row[0] {
        return Err(Error::CornerMismatch(format!(
            "toeplitz: first_col[0] = {} but first_row[0] = {}",
            first_col[0].format_entry(),
            first_row[0].format_entry()
        )));
    }
    Ok(Matrix::from_fn(first_col.len(), first_row.len(), |i, j| {
        if i >= j {
            first_col[i - j].clone()
        } else {
            first_row[j - i].clone()
        }
    }))
}

pub fn toeplitz_i64<T: Scalar>(first_col: &[i64], first_row: &[i64]) -> Result<Matrix<T>> {
    let c: Vec<T> = first_col.iter().map(|&v| T::from_i64(v)).collect();
    let r: Vec<T> = first_row.iter().map(|&v| T::from_i64(v)).collect();
    toeplitz(&c, &r)
}

/// `A[i][j] = h[i + j]` where `h` runs down `first_col` then along
/// `last_row`.
pub fn hankel<T: Scalar>(first_col: &[T], last_row: &[T]) -> Result<Matrix<T>> {
    nonempty(first_col, "first column")?;
    nonempty(last_row, "last row")?;
    let m = first_col.len();
    if first_col[m - 1] != last_row[0] {
        return Err(Error::CornerMismatch(format!(
            "hankel: first_col[last] = {} but last_row[0] = {}",
            first_col[m - 1].format_entry(),
            last_row[0].format_entry()
        )));
    }
    Ok(Matrix::from_fn(m, last_row.len(), |i, j| {
        let k = i + j;
        if k < m {
            first_col[k].clone()
        } else {
            last_row[k + 1 - m].clone()
        }
    }))
}

pub fn hankel_i64<T: Scalar>(first_col: &[i64], last_row: &[i64]) -> Result<Matrix<T>> {
    let c: Vec<T> = first_col.iter().map(|&v| T::from_i64(v)).collect();
    let r: Vec<T> = last_row.iter().map(|&v| T::from_i64(v)).collect();
    hankel(&c, &r)
}

/// `rows` rows, each the cyclic right shift of the one above.
pub fn circulant<T: Scalar>(first_row: &[T], rows: usize) -> Result<Matrix<T>> {
    nonempty(first_row, "first row")?;
    let n = first_row.len();
    Ok(Matrix::from_fn(rows, n, |i, j| first_row[(j + n - i % n) % n].clone()))
}

/// The block matrix `(T H)`.
pub fn block_th<T: Scalar>(t: &Matrix<T>, h: &Matrix<T>) -> Result<Matrix<T>> {
    t.hstack(h)
}

pub fn is_toeplitz<T: Scalar>(a: &Matrix<T>) -> bool {
    (1..a.rows()).all(|i| (1..a.cols()).all(|j| a.get(i, j) == a.get(i - 1, j - 1)))
}

pub fn is_hankel<T: Scalar>(a: &Matrix<T>) -> bool {
    (1..a.rows()).all(|i| (0..a.cols() - 1).all(|j| a.get(i, j) == a.get(i - 1, j + 1)))
}

fn random_ints<R: Rng>(rng: &mut R, len: usize) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-9..=9)).collect()
}

/// Random `m x n` Töplitz matrix with integer entries in `[-9, 9]`.
pub fn random_toeplitz<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<T> {
    let c = random_ints(rng, m);
    let mut r = random_ints(rng, n);
    r[0] = c[0];
    toeplitz_i64(&c, &r).expect("corner matches by construction")
}

/// Random `m x n` Hankel matrix with integer entries in `[-9, 9]`.
pub fn random_hankel<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<T> {
    let c = random_ints(rng, m);
    let mut r = random_ints(rng, n);
    r[0] = c[m - 1];
    hankel_i64(&c, &r).expect("corner matches by construction")
}

/// Random dense matrix with integer entries in `[-9, 9]`.
pub fn random_integer_matrix<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<T> {
    Matrix::from_fn(m, n, |_, _| T::from_i64(rng.gen_range(-9..=9)))
}

/// Random dense matrix with entries uniform in `[-1, 1]`.
pub fn random_float_matrix<R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<f64> {
    Matrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..=1.0))
}

/// Candidate nodes for geometric Hankel sequences.
fn nodes() -> Vec<Rational> {
    let mut out = Vec::new();
    for (p, q) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (3, 2), (2, 3)] {
        out.push(ratio(p, q));
        out.push(ratio(-p, q));
    }
    out
}

const MAX_RETRIES: usize = 100;

/// Hankel matrix of exact rank `r` from `h_k = Σ c_i x_i^k` with distinct
/// nonzero nodes `x_i` and nonzero integer weights `c_i`.
pub fn rank_deficient_hankel(n: usize, r: usize, seed: u64) -> Result<QMatrix> {
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!(
            "target rank {r} must lie in 1..={n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let pool = nodes();
    for _ in 0..MAX_RETRIES {
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        for i in 0..r {
            let j = rng.gen_range(i..idx.len());
            idx.swap(i, j);
        }
        let terms: Vec<(Rational, Rational)> = idx[..r]
            .iter()
            .map(|&i| {
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-9..=9);
                }
                (Rational::from_i64(c), pool[i].clone())
            })
            .collect();
        let h: Vec<Rational> = (0..2 * n - 1)
            .map(|k| {
                terms.iter().fold(Rational::from_i64(0), |acc, (c, x)| {
                    acc + c * num::pow::pow(x.clone(), k)
                })
            })
            .collect();
        let a = hankel(&h[..n], &h[n - 1..])?;
        if exact_rank(&a).rank == r {
            return Ok(a);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no rank-{r} Hankel matrix found in {MAX_RETRIES} attempts"
    )))
}

/// `J H` for `H` from [`rank_deficient_hankel`]: Töplitz with exact rank `r`.
pub fn rank_deficient_toeplitz(n: usize, r: usize, seed: u64) -> Result<QMatrix> {
    let h = rank_deficient_hankel(n, r, seed)?;
    Ok(&reverse_identity(n) * &h)
}

/// The 3 x 4 circulant with first row `(a, b, c, d)`.
pub fn circulant_example(params: [i64; 4]) -> QMatrix {
    let row: Vec<Rational> = params.iter().map(|&v| Rational::from_i64(v)).collect();
    circulant(&row, 3).expect("nonempty row")
}

/// The 5 x 5 singular alternate Töplitz matrix.
pub fn alternate_toeplitz_example() -> QMatrix {
    QMatrix::from_i64_rows(&[
        [2, -2, -2, 1, 1],
        [1, -2, -2, 2, 1],
        [1, 1, 2, -2, -2],
        [4, -1, 1, -2, -2],
        [-8, 4, 1, 1, 2],
    ])
    .expect("rectangular literal")
}

/// The 5 x 5 Töplitz matrix of rank 3.
pub fn rank3_toeplitz_example() -> QMatrix {
    toeplitz_i64(&[2, 1, 3, 4, 2], &[2, 4, 3, 1, 2]).expect("corner matches")
}

pub const PAPER_EXAMPLES: [&str; 3] = ["alternate-toeplitz", "rank3-toeplitz", "circulant-3x4"];

/// A worked example by name with the patterns it is stated for.
pub fn paper_example(name: &str) -> Result<(QMatrix, Vec<DisplacementPattern<Rational>>)> {
    use DisplacementKind::{Delta, Nabla};
    match name {
        "alternate-toeplitz" => {
            let z: QMatrix = alternating_shift(5);
            let n = -&z.transpose();
            Ok((
                alternate_toeplitz_example(),
                vec![
                    DisplacementPattern::new(Nabla, z.clone(), n.clone())?
                        .with_label("Zalt", "-ZaltT"),
                    DisplacementPattern::new(Delta, z.transpose(), n)?
                        .with_label("ZaltT", "-ZaltT"),
                ],
            ))
        }
        "rank3-toeplitz" => Ok((
            rank3_toeplitz_example(),
            vec![DisplacementPattern::shift_shift_t(Nabla, 5, 5)],
        )),
        "circulant-3x4" => Ok((
            circulant_example([1, 2, 3, 4]),
            vec![
                DisplacementPattern::cyclic(Nabla, 3, 4),
                DisplacementPattern::new(Delta, shift_matrix::<Rational>(3).transpose(), cyclic_shift(4))?
                    .with_label("St", "Cn"),
            ],
        )),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

/// Generator description accepted by the `gen` command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuredSpec {
    Toeplitz { n: usize },
    Hankel { n: usize },
    Circulant { n: usize, rows: usize },
    ToeplitzRank { n: usize, r: usize },
    HankelRank { n: usize, r: usize },
    Random { m: usize, n: usize },
    BlockTh { m: usize, n: usize, p: usize },
    Paper(String),
}

fn parse_sizes(s: &str, full: &str, count: std::ops::RangeInclusive<usize>) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("malformed structure spec `{full}`"));
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&x| x > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    if !count.contains(&v.len()) {
        return Err(bad());
    }
    Ok(v)
}

impl FromStr for StructuredSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (family, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("malformed structure spec `{s}`")))?;
        Ok(match family {
            "toeplitz" => Self::Toeplitz {
                n: parse_sizes(args, s, 1..=1)?[0],
            },
            "hankel" => Self::Hankel {
                n: parse_sizes(args, s, 1..=1)?[0],
            },
            "circulant" => {
                let v = parse_sizes(args, s, 1..=2)?;
                Self::Circulant {
                    n: v[0],
                    rows: v.get(1).copied().unwrap_or(v[0]),
                }
            }
            "toeplitz-rank" => {
                let v = parse_sizes(args, s, 2..=2)?;
                Self::ToeplitzRank { n: v[0], r: v[1] }
            }
            "hankel-rank" => {
                let v = parse_sizes(args, s, 2..=2)?;
                Self::HankelRank { n: v[0], r: v[1] }
            }
            "random" => {
                let v = parse_sizes(args, s, 2..=2)?;
                Self::Random { m: v[0], n: v[1] }
            }
            "block-th" => {
                let v = parse_sizes(args, s, 3..=3)?;
                Self::BlockTh {
                    m: v[0],
                    n: v[1],
                    p: v[2],
                }
            }
            "paper" => {
                if !PAPER_EXAMPLES.contains(&args) {
                    return Err(Error::UnknownExample(args.to_string()));
                }
                Self::Paper(args.to_string())
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown structure family `{family}`"
                )))
            }
        })
    }
}

impl StructuredSpec {
    /// Builds the matrix; random families draw from `seed`.
    pub fn build(&self, seed: u64) -> Result<QMatrix> {
        let mut rng = rng_from_seed(seed);
        Ok(match self {
            Self::Toeplitz { n } => random_toeplitz(&mut rng, *n, *n),
            Self::Hankel { n } => random_hankel(&mut rng, *n, *n),
            Self::Circulant { n, rows } => {
                let row: Vec<Rational> = random_ints(&mut rng, *n)
                    .into_iter()
                    .map(Rational::from_i64)
                    .collect();
                circulant(&row, *rows)?
            }
            Self::ToeplitzRank { n, r } => rank_deficient_toeplitz(*n, *r, seed)?,
            Self::HankelRank { n, r } => rank_deficient_hankel(*n, *r, seed)?,
            Self::Random { m, n } => random_integer_matrix(&mut rng, *m, *n),
            Self::BlockTh { m, n, p } => {
                let t: QMatrix = random_toeplitz(&mut rng, *m, *n);
                let h: QMatrix = random_hankel(&mut rng, *m, *p);
                block_th(&t, &h)?
            }
            Self::Paper(name) => paper_example(name)?.0,
        })
    }
}
