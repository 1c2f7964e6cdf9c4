//! Exact scalars: rationals, extended rationals and half-integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn qi(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational (expected `p/q` or an integer)")]
pub struct ParseRationalError(pub String);

pub fn parse_q(text: &str) -> Result<Q, ParseRationalError> {
    let t = text.trim();
    let err = || ParseRationalError(text.to_string());
    match t.split_once('/') {
        Some((p, d)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Q::new(p, d))
        }
        None => {
            if let Ok(n) = BigInt::from_str(t) {
                return Ok(Q::from_integer(n));
            }
            // Finite decimals are accepted for convenience ("0.25").
            if let Some((whole, frac)) = t.split_once('.') {
                let negative = whole.trim_start().starts_with('-');
                let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
                let n = BigInt::from_str(&digits).map_err(|_| err())?;
                let d = num_traits::pow(BigInt::from(10), frac.len());
                let v = Q::new(n, d);
                return Ok(if negative { -v } else { v });
            }
            Err(err())
        }
    }
}

/// Serde adapter: rationals as `"p/q"` strings.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = RawScalar::deserialize(d)?;
        raw.to_q().map_err(serde::de::Error::custom)
    }

    /// Accepts `"p/q"` strings as well as bare integers in human-written files.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawScalar {
        Int(i64),
        Text(String),
    }

    impl RawScalar {
        pub(crate) fn to_q(&self) -> Result<Q, ParseRationalError> {
            match self {
                RawScalar::Int(n) => Ok(qi(*n)),
                RawScalar::Text(t) => parse_q(t),
            }
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_q_vec {
    use super::serde_q::RawScalar;
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = values.iter().map(format_q).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw: Vec<RawScalar> = Vec::deserialize(d)?;
        raw.iter()
            .map(RawScalar::to_q)
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Vec<Q>>` matrices.
pub mod serde_q_matrix {
    use super::serde_q::RawScalar;
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(format_q).collect())
            .collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let raw: Vec<Vec<RawScalar>> = Vec::deserialize(d)?;
        raw.iter()
            .map(|r| r.iter().map(RawScalar::to_q).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// A rational extended by the two infinities, ordered in the obvious way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ext {
    NegInf,
    Finite(Q),
    PosInf,
}

impl Ext {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Ext::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn add_q(&self, c: &Q) -> Ext {
        match self {
            Ext::Finite(v) => Ext::Finite(v + c),
            other => other.clone(),
        }
    }
}

impl From<Q> for Ext {
    fn from(v: Q) -> Self {
        Ext::Finite(v)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        use Ext::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "+inf"),
            Ext::Finite(v) => write!(f, "{}", format_q(v)),
        }
    }
}

impl FromStr for Ext {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Ext::PosInf),
            "-inf" | "-infinity" => Ok(Ext::NegInf),
            other => parse_q(other).map(Ext::Finite),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_q::RawScalar::deserialize(d)? {
            serde_q::RawScalar::Int(n) => Ok(Ext::Finite(qi(n))),
            serde_q::RawScalar::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// An element of ½ℤ, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// The half-integer `twice / 2`.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_q(self) -> Q {
        q(self.0, 2)
    }

    pub fn from_q(value: &Q) -> Option<Self> {
        let twice = value * qi(2);
        if twice.denom().is_one() {
            twice.numer().to_i64().map(HalfInt)
        } else {
            None
        }
    }

    /// Class in ½ℤ/ℤ: `false` for integers, `true` for proper halves.
    pub fn is_proper_half(self) -> bool {
        !self.is_integer()
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_q::RawScalar::deserialize(d)?
            .to_q()
            .map_err(serde::de::Error::custom)?;
        HalfInt::from_q(&v)
            .ok_or_else(|| serde::de::Error::custom(format!("{} is not a half-integer", format_q(&v))))
    }
}

pub fn sign(value: &Q) -> i32 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-4").unwrap(), qi(-4));
        assert_eq!(parse_q("-0.25").unwrap(), q(-1, 4));
        assert_eq!(format_q(&q(-6, 4)), "-3/2");
        assert_eq!(format_q(&qi(7)), "7");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn extended_order() {
        let a: Ext = "-inf".parse().unwrap();
        let b: Ext = "1/2".parse().unwrap();
        let c: Ext = "+inf".parse().unwrap();
        assert!(a < b && b < c);
        assert_eq!(c.to_string(), "+inf");
    }

    #[test]
    fn half_integers() {
        let h = HalfInt::from_twice(3);
        assert_eq!(h.to_string(), "3/2");
        assert!(!h.is_integer());
        assert_eq!((h + h).to_integer(), Some(3));
        assert_eq!(HalfInt::from_q(&q(5, 2)), Some(HalfInt::from_twice(5)));
        assert_eq!(HalfInt::from_q(&q(1, 3)), None);
    }
}
