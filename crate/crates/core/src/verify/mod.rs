//! One check per displacement-rank identity or bound, and randomized
//! suites that run them.
//!
//! Every check computes both sides, compares them and returns a
//! [`BoundCheck`] carrying all intermediate ranks, so that a failing
//! instance can be diagnosed from the report alone. Rational inputs are
//! handled exactly; float inputs use the SVD threshold
//! [`DEFAULT_RANK_TOL`](crate::rank::DEFAULT_RANK_TOL).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::displacement::{delta, nabla, DisplacementKind};
use crate::error::Result;
use crate::io::format_matrix;
use crate::matrix::Matrix;
use crate::rank::rank;
use crate::scalar::Scalar;

mod checks;
mod suites;

pub use checks::*;
pub use suites::{run_suite, SuiteReport, DEFAULT_SIZES, SUITES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    pub fn eval(self, lhs: usize, rhs: usize) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Lt => lhs < rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Lt => "<",
        }
    }
}

/// A floating residual that must stay under `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub bound: f64,
}

/// Outcome of one check on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: usize,
    pub rhs: usize,
    pub relation: Relation,
    /// `relation(lhs, rhs)` and every residual within its bound.
    pub holds: bool,
    pub witnesses: BTreeMap<String, usize>,
    pub residuals: BTreeMap<String, Residual>,
    /// Values reported but not asserted.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub observed: BTreeMap<String, f64>,
    pub instance_digest: String,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, lhs: usize, relation: Relation, rhs: usize) -> Self {
        BoundCheck {
            name: name.into(),
            lhs,
            rhs,
            relation,
            holds: relation.eval(lhs, rhs),
            witnesses: BTreeMap::new(),
            residuals: BTreeMap::new(),
            observed: BTreeMap::new(),
            instance_digest: String::new(),
        }
    }

    pub fn witness(mut self, key: impl Into<String>, value: usize) -> Self {
        self.witnesses.insert(key.into(), value);
        self
    }

    pub fn witnesses<'a>(mut self, items: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        for (k, v) in items {
            self.witnesses.insert(k.to_string(), v);
        }
        self
    }

    /// Records a residual; the check fails unless `value <= bound`.
    pub fn residual(mut self, key: impl Into<String>, value: f64, bound: f64) -> Self {
        self.holds &= value <= bound;
        self.residuals.insert(key.into(), Residual { value, bound });
        self
    }

    pub fn observe(mut self, key: impl Into<String>, value: f64) -> Self {
        self.observed.insert(key.into(), value);
        self
    }

    pub fn digest(mut self, digest: String) -> Self {
        self.instance_digest = digest;
        self
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} {} {}",
            if self.holds { "ok" } else { "FAIL" },
            self.name,
            self.lhs,
            self.relation.symbol(),
            self.rhs
        )?;
        for (k, r) in &self.residuals {
            write!(f, ", {k} = {:.2e} (<= {:.2e})", r.value, r.bound)?;
        }
        if !self.holds {
            write!(f, " #{}", self.instance_digest)?;
        }
        Ok(())
    }
}

/// First 16 hex digits of SHA-256 over the check name and the inputs in
/// matrix file format.
pub fn instance_digest<T: Scalar>(name: &str, inputs: &[&Matrix<T>]) -> String {
    let mut h = Sha256::new();
    h.update(name.as_bytes());
    for m in inputs {
        h.update(b"\n--\n");
        h.update(format_matrix(*m).as_bytes());
    }
    h.finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Displacement rank by the backend's default rank method.
pub(crate) fn drank<T: Scalar>(
    kind: DisplacementKind,
    a: &Matrix<T>,
    z: &Matrix<T>,
    n: &Matrix<T>,
) -> Result<usize> {
    let d = match kind {
        DisplacementKind::Nabla => nabla(a, z, n)?,
        DisplacementKind::Delta => delta(a, z, n)?,
    };
    Ok(rank(&d)?.rank)
}
