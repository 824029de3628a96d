//! Textual displacement patterns, as accepted by the command line.
//!
//! ```text
//! nabla:S,St        ∇ with Z = S, N = S*
//! delta:S,S
//! nabla:Zalt,-ZaltT ∇ with Z = Zalt, N = -Zalt*
//! nabla:S,St4+S3    N = S*_4 ⊕ S_3
//! delta:@z.mat,J
//! ```
//!
//! Each side is a `+`-separated direct sum of atoms. An atom is an optional
//! `-`, then a name (`S`, `St`, `J`, `I`, `0`, `Cn`, `Zalt`) or `@path`,
//! then an optional size and an optional `T` (transpose; named atoms only).
//! Sizes are taken from the matrix being displaced; in a direct sum at most
//! one named atom may omit its size and absorbs the remainder.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::displacement::{DisplacementKind, DisplacementPattern};
use crate::error::{Error, Result};
use crate::io::read_matrix;
use crate::matrix::{
    alternating_shift, cyclic_shift, reverse_identity, shift_matrix, Matrix,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMatrix {
    Shift,
    ShiftT,
    Reverse,
    Identity,
    Zero,
    Cyclic,
    Alternating,
}

// Longest names first so that `St` is not read as `S` + `t`.
const NAMES: [(&str, NamedMatrix); 7] = [
    ("Zalt", NamedMatrix::Alternating),
    ("Cn", NamedMatrix::Cyclic),
    ("St", NamedMatrix::ShiftT),
    ("S", NamedMatrix::Shift),
    ("J", NamedMatrix::Reverse),
    ("I", NamedMatrix::Identity),
    ("0", NamedMatrix::Zero),
];

impl NamedMatrix {
    fn name(self) -> &'static str {
        NAMES.iter().find(|(_, m)| *m == self).map(|(s, _)| *s).unwrap()
    }

    pub fn build<T: Scalar>(self, n: usize) -> Matrix<T> {
        match self {
            NamedMatrix::Shift => shift_matrix(n),
            NamedMatrix::ShiftT => shift_matrix::<T>(n).transpose(),
            NamedMatrix::Reverse => reverse_identity(n),
            NamedMatrix::Identity => Matrix::identity(n),
            NamedMatrix::Zero => Matrix::zeros(n, n),
            NamedMatrix::Cyclic => cyclic_shift(n),
            NamedMatrix::Alternating => alternating_shift(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomBase {
    Named(NamedMatrix),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub negate: bool,
    pub base: AtomBase,
    pub size: Option<usize>,
    pub transpose: bool,
}

/// One side (`Z` or `N`) of a pattern: a direct sum of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideSpec {
    pub terms: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpec {
    pub kind: DisplacementKind,
    pub z: SideSpec,
    pub n: SideSpec,
}

fn unknown(s: &str) -> Error {
    Error::UnknownPattern(s.to_string())
}

fn parse_atom(text: &str) -> Result<Atom> {
    let (negate, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, text),
    };
    if let Some(path) = rest.strip_prefix('@') {
        if path.is_empty() {
            return Err(unknown(text));
        }
        return Ok(Atom {
            negate,
            base: AtomBase::File(PathBuf::from(path)),
            size: None,
            transpose: false,
        });
    }
    let (name, kind) = NAMES
        .iter()
        .find(|(n, _)| rest.starts_with(n))
        .ok_or_else(|| unknown(text))?;
    let mut rest = &rest[name.len()..];
    let transpose = match rest.strip_suffix('T') {
        Some(r) => {
            rest = r;
            true
        }
        None => false,
    };
    let size = if rest.is_empty() {
        None
    } else {
        match rest.parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(unknown(text)),
        }
    };
    Ok(Atom {
        negate,
        base: AtomBase::Named(*kind),
        size,
        transpose,
    })
}

impl FromStr for SideSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let terms = s
            .split('+')
            .map(|t| parse_atom(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        let unsized_named = terms
            .iter()
            .filter(|a| a.size.is_none() && matches!(a.base, AtomBase::Named(_)))
            .count();
        if terms.len() > 1 && unsized_named > 1 {
            return Err(Error::UnknownPattern(format!(
                "`{s}`: at most one term of a direct sum may omit its size"
            )));
        }
        Ok(SideSpec { terms })
    }
}

impl FromStr for PatternSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| unknown(s))?;
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "nabla" | "n" => DisplacementKind::Nabla,
            "delta" | "d" => DisplacementKind::Delta,
            _ => return Err(unknown(s)),
        };
        let (z, n) = rest.split_once(',').ok_or_else(|| unknown(s))?;
        Ok(PatternSpec {
            kind,
            z: z.trim().parse()?,
            n: n.trim().parse()?,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negate {
            f.write_str("-")?;
        }
        match &self.base {
            AtomBase::Named(m) => f.write_str(m.name())?,
            AtomBase::File(p) => write!(f, "@{}", p.display())?,
        }
        if let Some(n) = self.size {
            write!(f, "{n}")?;
        }
        if self.transpose {
            f.write_str("T")?;
        }
        Ok(())
    }
}

impl fmt::Display for SideSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(Atom::to_string).collect();
        f.write_str(&parts.join("+"))
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DisplacementKind::Nabla => "nabla",
            DisplacementKind::Delta => "delta",
        };
        write!(f, "{kind}:{},{}", self.z, self.n)
    }
}

impl Atom {
    fn build<T: Scalar>(&self, size: usize) -> Result<Matrix<T>> {
        let mut m: Matrix<T> = match &self.base {
            AtomBase::Named(named) => named.build(size),
            AtomBase::File(path) => read_matrix(path)?,
        };
        if self.transpose {
            m = m.transpose();
        }
        if self.negate {
            m = -&m;
        }
        Ok(m)
    }
}

impl SideSpec {
    /// Builds the `dim x dim` matrix for this side.
    pub fn resolve<T: Scalar>(&self, dim: usize) -> Result<Matrix<T>> {
        // Files fix their own size; load them first.
        let mut blocks: Vec<Option<Matrix<T>>> = Vec::with_capacity(self.terms.len());
        let mut known = 0usize;
        for atom in &self.terms {
            match (&atom.base, atom.size) {
                (AtomBase::File(_), _) => {
                    let m = atom.build::<T>(0)?;
                    if !m.is_square() {
                        return Err(Error::NotSquare {
                            op: "pattern",
                            rows: m.rows(),
                            cols: m.cols(),
                        });
                    }
                    known += m.rows();
                    blocks.push(Some(m));
                }
                (AtomBase::Named(_), Some(n)) => {
                    known += n;
                    blocks.push(Some(atom.build(n)?));
                }
                (AtomBase::Named(_), None) => blocks.push(None),
            }
        }
        if known > dim || (known < dim && !blocks.iter().any(Option::is_none)) {
            return Err(Error::InvalidArgument(format!(
                "pattern side `{self}` has size {known}, matrix needs {dim}"
            )));
        }
        let mut out: Option<Matrix<T>> = None;
        for (atom, block) in self.terms.iter().zip(blocks) {
            let block = match block {
                Some(b) => b,
                None if dim == known => {
                    return Err(Error::InvalidArgument(format!(
                        "pattern side `{self}` leaves no room for `{atom}`"
                    )))
                }
                None => atom.build(dim - known)?,
            };
            out = Some(match out {
                None => block,
                Some(acc) => acc.direct_sum(&block)?,
            });
        }
        out.ok_or_else(|| unknown(&self.to_string()))
    }
}

impl PatternSpec {
    /// Instantiates the pattern for an `rows x cols` matrix.
    pub fn resolve<T: Scalar>(&self, rows: usize, cols: usize) -> Result<DisplacementPattern<T>> {
        let z = self.z.resolve(rows)?;
        let n = self.n.resolve(cols)?;
        Ok(DisplacementPattern::new(self.kind, z, n)?
            .with_label(&self.z.to_string(), &self.n.to_string()))
    }
}

/// Parses and instantiates in one step.
pub fn parse_pattern<T: Scalar>(
    spec: &str,
    rows: usize,
    cols: usize,
) -> Result<DisplacementPattern<T>> {
    spec.parse::<PatternSpec>()?.resolve(rows, cols)
}
