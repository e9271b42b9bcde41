//! Exact non-negative rational quantities: ballot weights, thresholds, scores
//! and shares.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
///
/// Every score and threshold comparison in the crate is carried out on these
/// values, so boundary cases at the threshold never depend on rounding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(BigRational);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Weight(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(value: BigRational) -> Self {
        Weight(value)
    }

    /// Exact binary value of a finite float.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Weight)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest integer not below this value.
    pub fn ceil_integer(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Exact representation: an integer, a terminating decimal, or `p/q`.
    pub fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

fn is_terminating(denom: &BigInt) -> Option<usize> {
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut d = denom.clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d.is_one() {
        Some(twos.max(fives))
    } else {
        None
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            return write!(f, "{}", self.0.numer());
        }
        match is_terminating(self.0.denom()) {
            Some(digits) if digits <= 30 => {
                let scale = BigInt::from(10).pow(digits as u32);
                let scaled = (self.0.numer() * &scale) / self.0.denom();
                let neg = scaled.is_negative();
                let abs = scaled.abs().to_string();
                let padded = format!("{:0>width$}", abs, width = digits + 1);
                let (int, frac) = padded.split_at(padded.len() - digits);
                let frac = frac.trim_end_matches('0');
                write!(f, "{}{}.{}", if neg { "-" } else { "" }, int, frac)
            }
            _ => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Error returned when a weight literal is malformed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWeightError(pub String);

impl fmt::Display for ParseWeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed number `{}`", self.0)
    }
}

impl std::error::Error for ParseWeightError {}

impl FromStr for Weight {
    type Err = ParseWeightError;

    /// Accepts `12`, `2.5`, `-0.75` and `5/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseWeightError(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Weight(BigRational::new(n, d)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{}{}", int, frac);
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let denom = BigInt::from(10).pow(frac.len() as u32);
        let value = BigRational::new(numer, denom);
        Ok(Weight(if neg { -value } else { value }))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Weight {
    fn from(n: u64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<u32> for Weight {
    fn from(n: u32) -> Self {
        Weight::from(n as u64)
    }
}

impl From<usize> for Weight {
    fn from(n: usize) -> Self {
        Weight::from(n as u64)
    }
}

impl From<BigInt> for Weight {
    fn from(n: BigInt) -> Self {
        Weight(BigRational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Weight> for &Weight {
            type Output = Weight;
            fn $method(self, rhs: &Weight) -> Weight {
                Weight((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Weight> for Weight {
            type Output = Weight;
            fn $method(self, rhs: Weight) -> Weight {
                Weight(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Weight> for Weight {
            type Output = Weight;
            fn $method(self, rhs: &Weight) -> Weight {
                Weight(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Self {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Self {
        let mut acc = Weight::zero();
        for w in iter {
            acc += w;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("2.5".parse::<Weight>().unwrap(), Weight::from_ratio(5, 2));
        assert_eq!("5/2".parse::<Weight>().unwrap(), Weight::from_ratio(5, 2));
        assert_eq!("7".parse::<Weight>().unwrap(), Weight::from_integer(7));
        assert_eq!(".5".parse::<Weight>().unwrap(), Weight::from_ratio(1, 2));
        assert_eq!("-0.25".parse::<Weight>().unwrap(), Weight::from_ratio(-1, 4));
        assert!("1/0".parse::<Weight>().is_err());
        assert!("abc".parse::<Weight>().is_err());
        assert!("1.2.3".parse::<Weight>().is_err());
        assert!(".".parse::<Weight>().is_err());
    }

    #[test]
    fn formats_exactly() {
        assert_eq!(Weight::from_ratio(5, 2).to_string(), "2.5");
        assert_eq!(Weight::from_ratio(1, 3).to_string(), "1/3");
        assert_eq!(Weight::from_ratio(3, 40).to_string(), "0.075");
        assert_eq!(Weight::from_integer(12).to_string(), "12");
        assert_eq!(Weight::from_ratio(-1, 8).to_string(), "-0.125");
    }

    #[test]
    fn float_conversion_is_exact() {
        let w = Weight::from_f64_exact(0.1).unwrap();
        assert_ne!(w, Weight::from_ratio(1, 10));
        assert_eq!(w.to_f64(), 0.1);
        assert!(Weight::from_f64_exact(f64::NAN).is_none());
    }

    proptest! {
        #[test]
        fn display_round_trips(n in -100_000i64..100_000, d in 1i64..5_000) {
            let w = Weight::from_ratio(n, d);
            prop_assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
        }
    }
}
