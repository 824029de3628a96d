//! The two scalar backends: IEEE `f64` and arbitrary-precision rationals.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// A field element usable as a matrix entry.
///
/// Conversions to and from [`Rational`] are exact wherever the target can
/// represent the value: every finite `f64` is a dyadic rational, so
/// `f64 -> Rational` never rounds; the reverse direction rounds to nearest.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the rational backend.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn from_rational(v: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact conversion. Panics on NaN or infinite floats.
    fn to_rational(&self) -> Rational;
    /// Parses one entry of the matrix text format.
    fn parse_entry(s: &str) -> Result<Self, String>;
    /// Formats one entry so that `parse_entry` recovers it bit-exactly.
    fn format_entry(&self) -> String;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_rational(v: &Rational) -> Self {
        rational_to_f64(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("non-finite float has no rational value")
    }
    fn parse_entry(s: &str) -> Result<Self, String> {
        if s.contains('/') {
            return parse_rational(s).map(|q| rational_to_f64(&q));
        }
        let v = f64::from_str(s).map_err(|_| format!("invalid number `{s}`"))?;
        if !v.is_finite() {
            return Err(format!("non-finite entry `{s}`"));
        }
        Ok(v)
    }
    fn format_entry(&self) -> String {
        // `Display` for f64 prints the shortest string that round-trips.
        format!("{self}")
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("non-finite float has no rational value")
    }
    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn parse_entry(s: &str) -> Result<Self, String> {
        parse_rational(s)
    }
    fn format_entry(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Builds the rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn rational_to_f64(v: &Rational) -> f64 {
    if let Some(f) = ToPrimitive::to_f64(v) {
        return f;
    }
    // Fallback when the direct conversion fails.
    let n = v.numer().to_f64().unwrap_or(f64::NAN);
    let d = v.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Parses `p/q`, an integer, or a decimal with optional exponent, exactly.
fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p).map_err(|_| format!("invalid numerator in `{s}`"))?;
        let q = BigInt::from_str(q).map_err(|_| format!("invalid denominator in `{s}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| format!("invalid number `{s}`"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], i32::from_str(&s[pos + 1..]).ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let factor = num::pow::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    if negative {
        value = -value;
    }
    Some(value)
}
