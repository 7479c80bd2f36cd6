//! Exact rational exponents.

use num_traits::Zero;

use crate::error::{Error, Result};

/// Exponents, centers and coordinates are exact rationals.
pub type Rational = num_rational::Ratio<i64>;

/// Builds `numer / denom`. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"` or `"p"` exactly. Surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let malformed = |reason| Error::MalformedRational { text: text.into(), reason };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(malformed("empty string"));
    }
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer: i64 = numer.parse().map_err(|_| malformed("numerator is not an integer"))?;
    let denom: i64 = denom.parse().map_err(|_| malformed("denominator is not an integer"))?;
    if denom.is_zero() {
        return Err(malformed("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}
