//! Exact rational scalars.
//!
//! Every real-valued quantity in the engine (previsions, cone multipliers,
//! shifts) is a [`Rational`]. Values are always kept in lowest terms with a
//! positive denominator; `num-rational` normalises after every operation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error(
        "floating-point literal {0:?} rejected: write exact values as \"a/b\" strings or integers"
    )]
    Float(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"a/b"`, `"-a/b"` or a bare integer. Decimal points and exponents
/// are refused so that no value ever passes through binary floating point.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(ParseRationalError::Float(text.to_string()));
    }
    let parse_int = |part: &str| -> Result<BigInt, ParseRationalError> {
        let part = part.trim();
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(text.to_string()));
        }
        part.parse::<BigInt>()
            .map_err(|_| ParseRationalError::Malformed(text.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Display adaptor for slices of rationals, e.g. `(1/4, 3/4)`.
pub struct Tuple<'a>(pub &'a [Rational]);

impl fmt::Display for Tuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format(q))?;
        }
        f.write_str(")")
    }
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().min().cloned()
}

/// Serde adaptor: rationals travel as strings (`"1/2"`) and are accepted as
/// strings or JSON integers.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let lit = Literal::deserialize(d)?;
        lit.into_rational().map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_str`] for `Vec<Rational>`.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let lits = Vec::<Literal>::deserialize(d)?;
        lits.into_iter()
            .map(|l| l.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Same as [`serde_str`] for `Option<Rational>`.
pub mod serde_opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let lit = Option::<Literal>::deserialize(d)?;
        lit.map(|l| l.into_rational().map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// A JSON scalar that should denote an exact rational.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Text(String),
    Float(f64),
}

impl Literal {
    pub fn into_rational(self) -> Result<Rational, ParseRationalError> {
        match self {
            Literal::Int(n) => Ok(int(n)),
            Literal::Text(s) => parse(&s),
            Literal::Float(x) => Err(ParseRationalError::Float(x.to_string())),
        }
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
