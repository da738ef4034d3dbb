//! Exact rational scalars.
//!
//! [`Scalar`] is an arbitrary-precision rational kept in lowest terms with a
//! positive denominator. Text form is `p` or `p/q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn from_int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

/// `(-1)^k`.
pub fn sign_power(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Parses `p`, `-p`, `p/q`. The denominator must be nonzero.
pub fn parse(text: &str) -> std::result::Result<Scalar, String> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| format!("invalid rational `{text}`"))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| format!("invalid rational `{text}`"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Scalar::new(numer, denom))
}

pub fn parse_at(text: &str, line: usize) -> Result<Scalar> {
    parse(text).map_err(|message| Error::Parse { line, message })
}

pub fn format(value: &Scalar) -> String {
    value.to_string()
}

/// Least common multiple of the denominators of `values` (1 for none).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn abs(value: &Scalar) -> Scalar {
    value.abs()
}

/// Serde adapter storing a [`Scalar`] as its `p/q` string.
pub mod serde_text {
    use super::Scalar;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Scalar, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}
