//! Real-valued quantities in one of two modes: exact rationals or `f64`.
//!
//! Geometry code is written once against the [`Field`] trait and
//! instantiated with [`Rational`] (no rounding at all) or `f64` (tolerance
//! based predicates). Results that leave the generic code are wrapped in a
//! [`Scalar`] so callers can tell which mode produced them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Relative tolerance used by float-mode predicates.
///
/// Float comparisons treat `|x| <= FLOAT_EPS * scale` as zero, where `scale`
/// is supplied by the caller (typically the magnitude of the operands).
pub const FLOAT_EPS: f64 = 1e-10;

/// Scalar field used by the polytope algorithms.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Conversion from `f64`. Exact for [`Rational`] (every finite double is a
    /// dyadic rational).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;

    /// Sign of `self`, treating values within `FLOAT_EPS * scale` of zero as
    /// zero in float mode. `scale` is ignored in exact mode.
    fn sign(&self, scale: f64) -> Ordering;

    fn to_scalar(&self) -> Scalar;

    fn is_zero_at(&self, scale: f64) -> bool {
        self.sign(scale) == Ordering::Equal
    }

    fn is_pos_at(&self, scale: f64) -> bool {
        self.sign(scale) == Ordering::Greater
    }

    /// Total order used to canonicalize vertex lists.
    fn total_cmp(&self, other: &Self) -> Ordering;
}

impl Field for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn sign(&self, scale: f64) -> Ordering {
        let tol = FLOAT_EPS * scale.max(1.0);
        if *self > tol {
            Ordering::Greater
        } else if *self < -tol {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        <Rational as FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn sign(&self, _scale: f64) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// A real value produced by the library, tagged with its arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(<Rational as Field>::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(<Rational as Field>::from_i64(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => Field::to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Product; exact only when both operands are exact.
    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) if !b.is_zero() => Scalar::Exact(a / b),
            _ => Scalar::Float(self.to_f64() / other.to_f64()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Float(self.to_f64() - other.to_f64()),
        }
    }

    /// Comparison; exact when both operands are exact.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other.compare(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other.compare(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Exact(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", format_rational(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// `p/q` text form (`p` alone when the denominator is one).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(n));
    }
    // Decimal literal: scale by a power of ten.
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some((int, frac)) = body.split_once('.') {
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
            return Err(Error::Parse(format!("bad rational {s:?}")));
        }
        let digits = format!("{int}{frac}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    Err(Error::Parse(format!("bad rational {s:?}")))
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&format_rational(r)),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        match v {
            serde_json::Value::String(s) => parse_rational(&s)
                .map(Scalar::Exact)
                .map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(Scalar::Float)
                .ok_or_else(|| serde::de::Error::custom("non-finite number")),
            other => Err(serde::de::Error::custom(format!("expected scalar, got {other}"))),
        }
    }
}

/// Exact factorial `k!` as a rational.
pub fn factorial(k: u64) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-4").unwrap(), <Rational as Field>::from_i64(-4));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn exact_scalar_serializes_as_string() {
        let s = Scalar::ratio(4, 3);
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"4/3\"");
        let back: Scalar = serde_json::from_str("\"4/3\"").unwrap();
        assert_eq!(back, s);
        let f: Scalar = serde_json::from_str("0.5").unwrap();
        assert_eq!(f, Scalar::Float(0.5));
    }

    #[test]
    fn float_sign_uses_tolerance() {
        assert_eq!(1e-12f64.sign(1.0), Ordering::Equal);
        assert_eq!(1e-6f64.sign(1.0), Ordering::Greater);
        assert_eq!((-1e-6f64).sign(1.0), Ordering::Less);
    }

    #[test]
    fn from_f64_is_exact() {
        let r = <Rational as Field>::from_f64(0.1);
        assert_eq!(Field::to_f64(&r), 0.1);
        assert_ne!(r, Rational::new(1.into(), 10.into()));
    }

    #[test]
    fn mixed_arithmetic_degrades_to_float() {
        let a = Scalar::from_int(2);
        let b = Scalar::Float(0.5);
        assert_eq!(a.mul(&a), Scalar::from_int(4));
        assert_eq!(a.mul(&b), Scalar::Float(1.0));
        assert_eq!(factorial(5), <Rational as Field>::from_i64(120));
    }
}
