use thiserror::Error;

use crate::rank::RankReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch between {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("entry count {len} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },

    #[error("matrix is singular (rank {} of {dim})", report.rank)]
    Singular { dim: usize, report: RankReport },

    #[error("{op}: matrix is rank deficient (rank {} of {expected})", report.rank)]
    RankDeficient {
        op: &'static str,
        expected: usize,
        report: RankReport,
    },

    #[error("A + eta*I is singular for eta = {eta}; try a different eta")]
    SingularShift { eta: String },

    #[error("SVD did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("displacement operator not invertible via this sum: neither Z^{power} nor N^{power} vanishes")]
    NotNilpotent { power: usize },

    #[error("{0}")]
    CornerMismatch(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("P is not orthogonal: ||P P* - I||_F = {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("hypothesis {what} violated: residual {residual:e}")]
    HypothesisViolated { what: &'static str, residual: f64 },

    #[error("rank(A1) = {left} differs from rank(A2) = {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("degenerate certificate: {0}")]
    DegenerateCertificate(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn mismatch(
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            op,
            left_rows: left.0,
            left_cols: left.1,
            right_rows: right.0,
            right_cols: right.1,
        }
    }
}
