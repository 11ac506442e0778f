//! Exact rational helpers.
//!
//! Every probability and expectation value in this crate is a [`Rational`].
//! Floating point only appears in the Monte-Carlo reporting paths.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational literal `{0}`")]
pub struct RationalParseError(pub String);

/// Shorthand constructor, panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `a`, `-a`, `a/b` or a decimal such as `0.125`, exactly.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let bad = || RationalParseError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(bad)?;
        let den = parse_decimal(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        num / den
    } else {
        parse_decimal(body).ok_or_else(bad)?
    };
    Ok(if negative { -value } else { value })
}

/// Unsigned decimal digits with an optional fractional part.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (whole, frac) = match s.split_once('.') {
        Some((w, f)) => (w, f),
        None => (s, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(Rational::new(numer, denom))
}

/// Renders as `num/den`, including integers (`4/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders integers bare and everything else as `num/den`; used by the
/// program pretty-printer so literals re-lex as single tokens.
pub fn format_literal(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// `2^-bits` as an exact rational.
pub fn pow2_neg(bits: usize) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), bits))
}

/// `k/denom` for `k = 0..=denom`.
pub fn uniform_grid(denom: u32) -> Vec<Rational> {
    (0..=denom as i64).map(|k| rat(k, denom as i64)).collect()
}

/// The default parameter grid `{0, 1/8, ..., 1}`.
pub fn dyadic_grid() -> Vec<Rational> {
    uniform_grid(8)
}

/// Serializes a rational as a `"num/den"` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn serialize_rationals<S: serde::Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(format_rational))
}
