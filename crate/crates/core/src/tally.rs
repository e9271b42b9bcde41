//! Integer tallies on a common denominator.
//!
//! A profile's weights are rescaled once to integers sharing one denominator.
//! Rules then add and compare plain integers: `i128` when every partial sum
//! fits, `BigInt` otherwise. Both are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::weight::Weight;

pub(crate) trait Tally: Clone + Ord + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn add_ref(&mut self, other: &Self);
    fn to_bigint(&self) -> BigInt;
}

impl Tally for i128 {
    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn add_ref(&mut self, other: &Self) {
        *self += *other;
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Tally for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug)]
pub(crate) enum ScaledValues {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// Ballot weights as integers over a shared denominator.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub denom: BigInt,
    pub values: ScaledValues,
}

impl Scaled {
    pub fn new<'a>(weights: impl Iterator<Item = &'a Weight> + Clone) -> Self {
        let mut denom = BigInt::one();
        for w in weights.clone() {
            if !w.denom().is_one() {
                denom = denom.lcm(w.denom());
            }
        }
        let big: Vec<BigInt> = weights
            .map(|w| w.numer() * (&denom / w.denom()))
            .collect();
        let total: BigInt = big.iter().sum();
        // Leave headroom so sums of two totals still fit.
        let limit = BigInt::from(i128::MAX / 4);
        let values = if total <= limit {
            ScaledValues::Small(big.iter().map(|b| b.to_i128().unwrap()).collect())
        } else {
            ScaledValues::Big(big)
        };
        Scaled { denom, values }
    }

    pub fn to_weight<T: Tally>(&self, value: &T) -> Weight {
        Weight::from_big(BigRational::new(value.to_bigint(), self.denom.clone()))
    }

    /// `ceil(tau * denom)`: an integer sum `s` satisfies `s / denom >= tau`
    /// exactly when `s >= ceil(tau * denom)`.
    pub fn threshold_big(&self, tau: &Weight) -> BigInt {
        let scaled = tau.as_big() * BigRational::from_integer(self.denom.clone());
        scaled.ceil().to_integer()
    }

    pub fn threshold_small(&self, tau: &Weight) -> i128 {
        self.threshold_big(tau).to_i128().unwrap_or(if tau.is_negative() {
            i128::MIN
        } else {
            i128::MAX
        })
    }
}

/// Runs `$body` with `$w` bound to the scaled ballot weights and `$t` to the
/// scaled threshold, monomorphised for both tally representations.
macro_rules! with_tally {
    ($scaled:expr, $tau:expr, |$w:ident, $t:ident| $body:expr) => {{
        let scaled: &$crate::tally::Scaled = $scaled;
        match &scaled.values {
            $crate::tally::ScaledValues::Small(values) => {
                let $w: &[i128] = values;
                let $t: i128 = scaled.threshold_small($tau);
                $body
            }
            $crate::tally::ScaledValues::Big(values) => {
                let $w: &[num_bigint::BigInt] = values;
                let $t: num_bigint::BigInt = scaled.threshold_big($tau);
                $body
            }
        }
    }};
}

pub(crate) use with_tally;
