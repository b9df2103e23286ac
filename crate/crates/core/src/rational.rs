//! Exact scalars: arbitrary-precision rationals and their extension by `+∞`
//! for measure values.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Largest integer not above `value`.
pub fn floor_i64(value: &Rational) -> Option<i64> {
    value.floor().to_integer().to_i64()
}

/// Floor division on integers, valid for either sign of `divisor`.
pub fn div_floor(numer: i64, divisor: i64) -> i64 {
    num::integer::div_floor(numer, divisor)
}

/// A nonnegative extended rational: a finite value or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn one() -> Self {
        ExtRational::Finite(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(v) if v.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtRational::Finite(v) if v.is_negative())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(v) => Some(v),
            ExtRational::Infinite => None,
        }
    }

    /// Product with a finite nonnegative factor, using `0·∞ = 0`.
    pub fn scale(&self, factor: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v * factor),
            ExtRational::Infinite if factor.is_zero() => ExtRational::zero(),
            ExtRational::Infinite => ExtRational::Infinite,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(v) => to_f64(v),
            ExtRational::Infinite => f64::INFINITY,
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(value: Rational) -> Self {
        ExtRational::Finite(value)
    }
}

impl From<i64> for ExtRational {
    fn from(value: i64) -> Self {
        ExtRational::Finite(int(value))
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinite,
        }
    }
}

impl<'a> Add<&'a ExtRational> for &'a ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &'a ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinite,
        }
    }
}

impl Sum for ExtRational {
    fn sum<I: Iterator<Item = ExtRational>>(iter: I) -> ExtRational {
        iter.fold(ExtRational::zero(), |acc, x| acc + x)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinite) => Ordering::Less,
            (ExtRational::Infinite, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinite, ExtRational::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(v) => write!(f, "{v}"),
            ExtRational::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(ExtRational::from(3) + ExtRational::Infinite, ExtRational::Infinite);
        assert_eq!(ExtRational::from(3) + ExtRational::from(4), ExtRational::from(7));
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        assert!(ExtRational::Infinite.scale(&int(0)).is_zero());
        assert_eq!(ExtRational::Infinite.scale(&int(2)), ExtRational::Infinite);
    }

    #[test]
    fn ordering_puts_infinity_last() {
        let mut v = vec![ExtRational::Infinite, ExtRational::from(2), ExtRational::zero()];
        v.sort();
        assert_eq!(v, vec![ExtRational::zero(), ExtRational::from(2), ExtRational::Infinite]);
    }

    #[test]
    fn floor_division_rounds_down_for_both_signs() {
        assert_eq!(div_floor(-1, -2), 0);
        assert_eq!(div_floor(-2, -2), 1);
        assert_eq!(div_floor(-3, -2), 1);
        assert_eq!(div_floor(1, 2), 0);
        assert_eq!(div_floor(-1, 2), -1);
        assert_eq!(floor_i64(&rat(-7, 2)), Some(-4));
    }
}
