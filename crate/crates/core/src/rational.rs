//! Exact rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Text form is `"p/q"` or `"p"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("{x} is not finite")))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |m, v| if v > m { v } else { m })
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let text = RationalText::deserialize(d)?;
    text.into_rational().map_err(serde::de::Error::custom)
}

/// Accepts either a `"p/q"` string or a bare integer.
#[derive(Debug, Clone, Deserialize, serde::Serialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn into_rational(self) -> Result<Rational> {
        match self {
            RationalText::Int(n) => Ok(int(n)),
            RationalText::Text(s) => parse(&s),
        }
    }
}

impl PartialEq for RationalText {
    fn eq(&self, other: &Self) -> bool {
        self.clone().into_rational().ok() == other.clone().into_rational().ok()
    }
}

pub fn parse_matrix(rows: &[Vec<RationalText>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .map(|row| row.iter().cloned().map(RationalText::into_rational).collect())
        .collect()
}

pub fn format_matrix(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|row| row.iter().map(|r| r.to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse(" -2 ").unwrap(), int(-2));
        assert_eq!(parse("3/-6").unwrap(), frac(-1, 2));
        assert_eq!(frac(3, -6).denom(), &BigInt::from(2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for r in [frac(-7, 3), int(5), zero()] {
            assert_eq!(parse(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.375).unwrap(), frac(3, 8));
        assert!(from_f64(f64::INFINITY).is_err());
    }
}
