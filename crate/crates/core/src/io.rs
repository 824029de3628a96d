//! Plain-text matrix files.
//!
//! ```text
//! # optional comment lines
//! 2 3
//! 1 -1/2 0.25
//! 0 3 7
//! ```
//!
//! The first non-comment line holds `rows cols`; exactly `rows` lines of
//! `cols` whitespace-separated entries follow. Entries are decimals (with
//! optional exponent) or `p/q` rationals. Blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of a line with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push((s, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing `rows cols` header"))?;
    let htoks = tokens(header);
    if htoks.len() != 2 {
        return Err(parse_err(hline, 1, "header must be `rows cols`"));
    }
    let mut dims = [0usize; 2];
    for (slot, (col, tok)) in dims.iter_mut().zip(&htoks) {
        *slot = tok
            .parse::<usize>()
            .map_err(|_| parse_err(hline, *col, format!("invalid dimension `{tok}`")))?;
        if *slot == 0 {
            return Err(parse_err(hline, *col, "dimensions must be positive"));
        }
    }
    let [rows, cols] = dims;

    let mut data = Vec::with_capacity(rows * cols);
    let mut last_line = hline;
    for _ in 0..rows {
        let (lno, line) = lines.next().ok_or_else(|| {
            parse_err(
                last_line + 1,
                1,
                format!("expected {rows} rows, found {}", data.len() / cols),
            )
        })?;
        last_line = lno;
        let toks = tokens(line);
        if toks.len() != cols {
            let column = toks.get(cols).map_or(line.chars().count() + 1, |t| t.0);
            return Err(parse_err(
                lno,
                column,
                format!("expected {cols} entries, found {}", toks.len()),
            ));
        }
        for (col, tok) in toks {
            data.push(T::parse_entry(tok).map_err(|m| parse_err(lno, col, m))?);
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(parse_err(lno, 1, "unexpected content after last row"));
    }
    Matrix::from_vec(rows, cols, data)
}

pub fn format_matrix<T: Scalar>(a: &Matrix<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(Scalar::format_entry).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<Matrix<T>> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn write_matrix<T: Scalar>(path: impl AsRef<Path>, a: &Matrix<T>) -> Result<()> {
    std::fs::write(path, format_matrix(a))?;
    Ok(())
}
