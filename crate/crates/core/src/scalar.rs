//! Numeric abstraction for the partition bookkeeping.
//!
//! Charges, thresholds and constants are computed in a generic scalar so that
//! exact rationals and floats share one implementation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, ToPrimitive, Zero};

pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Lossless for the rational types, rounded for floats.
    fn from_count(n: usize) -> Self;

    fn ratio(num: i64, den: i64) -> Self;

    /// `true` when arithmetic carries no rounding.
    fn is_exact() -> bool;

    /// `floor(self)` clamped at zero.
    fn floor_count(&self) -> usize;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_exact() -> bool {
        false
    }
    fn floor_count(&self) -> usize {
        if *self <= 0.0 {
            0
        } else {
            self.floor() as usize
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_count(n: usize) -> Self {
        n as f32
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
    fn is_exact() -> bool {
        false
    }
    fn floor_count(&self) -> usize {
        if *self <= 0.0 {
            0
        } else {
            self.floor() as usize
        }
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_exact() -> bool {
        true
    }
    fn floor_count(&self) -> usize {
        if *self <= BigRational::zero() {
            0
        } else {
            self.floor().to_integer().to_usize().unwrap_or(usize::MAX)
        }
    }
    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for Rational64 {
    fn from_count(n: usize) -> Self {
        Rational64::from_integer(n as i64)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn is_exact() -> bool {
        true
    }
    fn floor_count(&self) -> usize {
        if *self <= Rational64::zero() {
            0
        } else {
            self.floor().to_integer() as usize
        }
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
