//! The two arithmetic modes of the exact recurrences.
//!
//! Exact mode runs the recurrences on integers: every weight is multiplied by the common
//! denominator `D` of the model, so after `n` steps the true mass is `raw / D^n`. Float mode
//! runs the same loops on `f64` with `D = 1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Accumulator used inside the recurrences.
pub trait Semiring: Clone + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += a * b`
    fn mul_add(&mut self, a: &Self, b: &Self);
    fn add_assign(&mut self, a: &Self);
    fn mul_small(&self, k: u64) -> Self;
}

impl Semiring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    #[inline]
    fn mul_add(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    #[inline]
    fn add_assign(&mut self, a: &Self) {
        *self += a;
    }
    fn mul_small(&self, k: u64) -> Self {
        self * k as f64
    }
}

impl Semiring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    #[inline]
    fn mul_add(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) {
            *self += a * b;
        }
    }
    #[inline]
    fn add_assign(&mut self, a: &Self) {
        *self += a;
    }
    fn mul_small(&self, k: u64) -> Self {
        self * BigInt::from(k)
    }
}

impl Semiring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_add(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) {
            *self += a * b;
        }
    }
    fn add_assign(&mut self, a: &Self) {
        *self += a;
    }
    fn mul_small(&self, k: u64) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
}

/// Public number type of a recurrence result: [`BigRational`] (exact) or `f64` (float).
pub trait Arith: Semiring + PartialEq + PartialOrd + fmt::Display {
    /// Accumulator the recurrences run on.
    type Raw: Semiring;

    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_u64(k: u64) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;

    fn raw_one() -> Self::Raw;
    /// Weight of a single step in raw units.
    fn raw_weight(q: &BigRational, denom: &BigInt) -> Self::Raw;
    /// Converts a raw accumulator that has absorbed `steps` weights back to a mass.
    fn from_raw(raw: &Self::Raw, steps: usize, denom: &BigInt) -> Self;
    /// Whether a probability tail can stop being summed: `remaining` is the mass not yet
    /// accounted for, `term` the last term added and `prev` the one before it.
    fn tail_exhausted(remaining: &Self, term: &Self, prev: &Self, total: &Self) -> bool;
}

impl Arith for f64 {
    type Raw = f64;

    fn one() -> Self {
        1.0
    }
    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn from_u64(k: u64) -> Self {
        k as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn raw_one() -> f64 {
        1.0
    }
    fn raw_weight(q: &BigRational, _denom: &BigInt) -> f64 {
        Self::from_rational(q)
    }
    fn from_raw(raw: &f64, _steps: usize, _denom: &BigInt) -> Self {
        *raw
    }
    fn tail_exhausted(remaining: &Self, term: &Self, prev: &Self, total: &Self) -> bool {
        *remaining <= 1e-15 * total.abs() || (*term <= 1e-17 * total.abs() && term <= prev)
    }
}

impl Arith for BigRational {
    type Raw = BigInt;

    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn from_u64(k: u64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn raw_one() -> BigInt {
        One::one()
    }
    fn raw_weight(q: &BigRational, denom: &BigInt) -> BigInt {
        let scaled = q * BigRational::from_integer(denom.clone());
        debug_assert!(scaled.is_integer());
        scaled.to_integer()
    }
    fn from_raw(raw: &BigInt, steps: usize, denom: &BigInt) -> Self {
        BigRational::new(raw.clone(), num_traits::pow(denom.clone(), steps))
    }
    fn tail_exhausted(remaining: &Self, _term: &Self, _prev: &Self, _total: &Self) -> bool {
        Zero::is_zero(remaining)
    }
}
