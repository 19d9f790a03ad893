//! Exact rationals with an interval fallback.
//!
//! Operations on two exact values stay exact; anything touching an interval
//! (or an irrational function value) becomes an interval at the widest
//! precision involved.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Exact(BigRational),
    Interval(Interval),
}

/// `ln` of a nonnegative scalar; exact zero maps to negative infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogValue {
    NegInfinity,
    Finite(Interval),
}

impl LogValue {
    pub fn finite(&self) -> Option<&Interval> {
        match self {
            LogValue::NegInfinity => None,
            LogValue::Finite(i) => Some(i),
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::NegInfinity => f.write_str("-inf"),
            LogValue::Finite(i) => i.fmt(f),
        }
    }
}

/// "num/den", or just "num" for integers.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Terminating decimal when the denominator has only the factors 2 and 5,
/// "num/den" otherwise.
pub fn rational_decimal(r: &BigRational) -> String {
    let mut d = r.denom().clone();
    let mut digits = 0usize;
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return rational_string(r);
    }
    digits += twos.max(fives);
    if digits == 0 {
        return r.numer().to_string();
    }
    let scaled = (r * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits)))
        .to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// Parses "a/b", an integer, or a finite decimal such as "0.95" into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl Scalar {
    pub fn int(i: impl Into<BigInt>) -> Self {
        Scalar::Exact(BigRational::from_integer(i.into()))
    }

    pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Scalar::Exact(BigRational::new(n.into(), d.into()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_rational(text).map(Scalar::Exact)
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Interval(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.as_exact().is_some_and(|r| r.is_zero())
    }

    /// The precision of an interval operand, or `None` for exact values.
    pub fn prec(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Interval(i) => Some(i.prec()),
        }
    }

    pub fn to_interval(&self, prec: u32) -> Interval {
        match self {
            Scalar::Exact(r) => Interval::from_rational(r, prec),
            Scalar::Interval(i) => i.clone(),
        }
    }

    fn binary(
        &self,
        o: &Scalar,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        inexact: impl Fn(&Interval, &Interval) -> Interval,
    ) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => {
                let p = self.prec().max(o.prec()).unwrap();
                Scalar::Interval(inexact(&self.to_interval(p), &o.to_interval(p)))
            }
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        self.binary(o, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.binary(o, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        // an exact zero annihilates even an interval factor
        if self.is_exact_zero() || o.is_exact_zero() {
            return Scalar::int(0);
        }
        self.binary(o, |a, b| a * b, |a, b| a * b)
    }

    /// Panics on an exact zero divisor or an interval divisor containing 0.
    pub fn div(&self, o: &Scalar) -> Scalar {
        assert!(!o.is_exact_zero(), "division by zero");
        if self.is_exact_zero() {
            return Scalar::int(0);
        }
        self.binary(o, |a, b| a / b, |a, b| a / b)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Interval(i) => Scalar::Interval(-i),
        }
    }

    /// Exact when the value is the square of a rational.
    pub fn sqrt(&self, prec: u32) -> Scalar {
        if let Scalar::Exact(r) = self {
            assert!(!r.is_negative(), "square root of a negative number");
            let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
            if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                return Scalar::Exact(BigRational::new(n, d));
            }
        }
        Scalar::Interval(self.to_interval(self.prec().unwrap_or(prec)).sqrt())
    }

    pub fn ln(&self, prec: u32) -> LogValue {
        if self.is_exact_zero() {
            return LogValue::NegInfinity;
        }
        LogValue::Finite(self.to_interval(self.prec().unwrap_or(prec)).ln())
    }

    /// Exact values compare equal; otherwise the enclosures must overlap.
    pub fn agrees_with(&self, o: &Scalar) -> bool {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Exact(a), Scalar::Interval(i)) | (Scalar::Interval(i), Scalar::Exact(a)) => {
                i.contains_rational(a)
            }
            (Scalar::Interval(a), Scalar::Interval(b)) => a.overlaps(b),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => Interval::from_rational(r, 64).to_f64(),
            Scalar::Interval(i) => i.to_f64(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&rational_string(r)),
            Scalar::Interval(i) => i.fmt(f),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<Interval> for Scalar {
    fn from(i: Interval) -> Self {
        Scalar::Interval(i)
    }
}
