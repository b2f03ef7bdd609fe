//! Closed real intervals with outward-widened elementary operations.
//!
//! Results are not computed with directed rounding. Every elementary
//! operation widens its result by `Scalar::widen_rel` relative to each bound
//! (with an absolute floor of `Scalar::widen_abs`) instead, which covers
//! round-to-nearest error in practice but is not a rigorous guarantee.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    /// The divisor contains zero; the caller should split the box.
    #[error("division by an interval containing zero")]
    DivisionByZero,
}

/// `[lo, hi]`, or the distinguished empty interval.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    /// Panics if `lo > hi` or either bound is NaN.
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(v: T) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn empty() -> Self {
        Self {
            lo: T::infinity(),
            hi: T::neg_infinity(),
        }
    }

    pub fn entire() -> Self {
        Self {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn width(&self) -> T {
        if self.is_empty() {
            T::zero()
        } else {
            self.hi - self.lo
        }
    }

    pub fn mid(&self) -> T {
        let half = T::lit(0.5);
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo.is_infinite() && self.hi.is_infinite() {
                T::zero()
            } else if self.lo.is_infinite() {
                T::min_value()
            } else {
                T::max_value()
            };
        }
        let m = self.lo * half + self.hi * half;
        m.max(self.lo).min(self.hi)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> T {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(T::zero())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    /// `self` lies strictly inside `other`.
    pub fn is_interior_of(&self, other: &Self) -> bool {
        !self.is_empty() && other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Self { lo, hi }
        } else {
            Self::empty()
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let m = self.mid();
        (Self { lo: self.lo, hi: m }, Self { lo: m, hi: self.hi })
    }

    fn widened(lo: T, hi: T) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::entire();
        }
        let pad = |v: T| (v.abs() * T::widen_rel()).max(T::widen_abs());
        Self {
            lo: lo - pad(lo),
            hi: hi + pad(hi),
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        if self.is_empty() || rhs.is_empty() {
            return Ok(Self::empty());
        }
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Ok(Self::widened(min4(q), max4(q)))
    }

    /// Integer power. Even powers use the envelope rule, so `[-2, 3]^2` is
    /// `[0, 9]` rather than the product `[-6, 9]`.
    pub fn powi(self, n: i32) -> Result<Self, IntervalError> {
        if self.is_empty() {
            return Ok(self);
        }
        if n == 0 {
            return Ok(Self::point(T::one()));
        }
        if n < 0 {
            if self.contains_zero() {
                return Err(IntervalError::DivisionByZero);
            }
            let p = self.powi(-n)?;
            return Self::point(T::one()).checked_div(p);
        }
        let (a, b) = (self.lo.powi(n), self.hi.powi(n));
        Ok(if n % 2 == 1 || self.lo >= T::zero() {
            Self::widened(a, b)
        } else if self.hi <= T::zero() {
            Self::widened(b, a)
        } else {
            let w = Self::widened(T::zero(), a.max(b));
            Self { lo: T::zero(), hi: w.hi }
        })
    }

    /// Square root over the nonnegative part; empty if entirely negative.
    pub fn sqrt(self) -> Self {
        if self.is_empty() || self.hi < T::zero() {
            return Self::empty();
        }
        let lo = self.lo.max(T::zero()).sqrt();
        let w = Self::widened(lo, self.hi.sqrt());
        Self {
            lo: w.lo.max(T::zero()),
            hi: w.hi,
        }
    }

    pub fn sin(self) -> Self {
        let half_pi = T::FRAC_PI_2();
        self.periodic(|v| v.sin(), half_pi, -half_pi)
    }

    pub fn cos(self) -> Self {
        self.periodic(|v| v.cos(), T::zero(), T::PI())
    }

    /// Range of a 2π-periodic function with value 1 at `max_phase` and -1 at
    /// `min_phase` and monotone in between.
    fn periodic(self, f: impl Fn(T) -> T, max_phase: T, min_phase: T) -> Self {
        if self.is_empty() {
            return self;
        }
        let one = T::one();
        let two_pi = T::TAU();
        if !(self.width() < two_pi) {
            return Self { lo: -one, hi: one };
        }
        let hits = |phase: T| {
            let k = ((self.lo - phase) / two_pi).ceil();
            phase + k * two_pi <= self.hi
        };
        let (a, b) = (f(self.lo), f(self.hi));
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        if hits(max_phase) {
            hi = one;
        }
        if hits(min_phase) {
            lo = -one;
        }
        let w = Self::widened(lo, hi);
        Self {
            lo: w.lo.max(-one),
            hi: w.hi.min(one),
        }
    }
}

fn min4<T: Scalar>(v: [T; 4]) -> T {
    v[0].min(v[1]).min(v[2].min(v[3]))
}

fn max4<T: Scalar>(v: [T; 4]) -> T {
    v[0].max(v[1]).max(v[2].max(v[3]))
}

impl<T: Scalar> Add for Interval<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_empty() || rhs.is_empty() {
            return Self::empty();
        }
        Self::widened(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl<T: Scalar> Sub for Interval<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        if self.is_empty() || rhs.is_empty() {
            return Self::empty();
        }
        Self::widened(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl<T: Scalar> Mul for Interval<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_empty() || rhs.is_empty() {
            return Self::empty();
        }
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        if p.iter().any(|v| v.is_nan()) {
            return Self::entire();
        }
        Self::widened(min4(p), max4(p))
    }
}

impl<T: Scalar> Neg for Interval<T> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_empty() {
            return self;
        }
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<T: Scalar> fmt::Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{:?}, {:?}]", self.lo, self.hi)
        }
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type I = Interval<f64>;

    fn iv(lo: f64, hi: f64) -> I {
        I::new(lo, hi)
    }

    #[test]
    fn even_power_straddling_zero() {
        let r = iv(-2.0, 3.0).powi(2).unwrap();
        assert_eq!(r.lo(), 0.0);
        assert!(r.hi() >= 9.0 && r.hi() < 9.0 + 1e-12);
        let r = iv(-3.0, -2.0).powi(2).unwrap();
        assert!(r.contains(4.0) && r.contains(9.0) && !r.contains(3.9));
    }

    #[test]
    fn negative_power_needs_zero_free_base() {
        assert_eq!(iv(-1.0, 1.0).powi(-1), Err(IntervalError::DivisionByZero));
        let r = iv(2.0, 4.0).powi(-2).unwrap();
        assert!(r.contains(1.0 / 16.0) && r.contains(0.25));
    }

    #[test]
    fn self_subtraction_is_not_zero() {
        let x = iv(0.0, 1.0);
        let r = x - x;
        assert!(r.contains(-1.0) && r.contains(1.0));
    }

    #[test]
    fn sine_over_half_turn() {
        let r = iv(0.0, std::f64::consts::PI).sin();
        assert!(r.contains(0.0) && r.contains(1.0));
        assert!(r.lo() > -1e-12 && r.hi() == 1.0);
    }

    #[test]
    fn cosine_full_turn_saturates() {
        let r = iv(-10.0, 10.0).cos();
        assert_eq!((r.lo(), r.hi()), (-1.0, 1.0));
        let r = iv(0.1, 0.2).cos();
        assert!(r.contains(0.2f64.cos()) && r.contains(0.1f64.cos()) && r.hi() < 1.0);
    }

    #[test]
    fn sqrt_rules() {
        assert!(iv(-2.0, -1.0).sqrt().is_empty());
        let r = iv(-1.0, 4.0).sqrt();
        assert_eq!(r.lo(), 0.0);
        assert!(r.contains(2.0));
    }

    #[test]
    fn division_by_straddling_interval_signals_split() {
        assert_eq!(iv(1.0, 2.0).checked_div(iv(-1.0, 1.0)), Err(IntervalError::DivisionByZero));
        let r = iv(1.0, 2.0).checked_div(iv(2.0, 4.0)).unwrap();
        assert!(r.contains(0.25) && r.contains(1.0));
    }

    #[test]
    fn empty_propagates() {
        let e = I::empty();
        assert!(e.is_empty());
        assert!((e + iv(0.0, 1.0)).is_empty());
        assert!((iv(0.0, 1.0) * e).is_empty());
        assert!(iv(0.0, 1.0).intersect(&iv(2.0, 3.0)).is_empty());
    }

    #[test]
    fn interior_and_hull() {
        assert!(iv(0.2, 0.8).is_interior_of(&iv(0.0, 1.0)));
        assert!(!iv(0.0, 0.8).is_interior_of(&iv(0.0, 1.0)));
        assert_eq!(iv(0.0, 1.0).hull(&iv(3.0, 4.0)), iv(0.0, 4.0));
    }

    #[test]
    fn single_precision_works() {
        let x = Interval::<f32>::new(1.0, 2.0);
        let r = (x * x).sqrt();
        assert!(r.contains(1.0) && r.contains(2.0));
    }

    fn arb_interval() -> impl Strategy<Value = (I, f64)> {
        (-50.0f64..50.0, 0.0f64..20.0, 0.0f64..=1.0)
            .prop_map(|(lo, w, t)| (iv(lo, lo + w), lo + t * w))
    }

    proptest! {
        #[test]
        fn binary_ops_contain_point_results((a, x) in arb_interval(), (b, y) in arb_interval()) {
            prop_assert!((a + b).contains(x + y));
            prop_assert!((a - b).contains(x - y));
            prop_assert!((a * b).contains(x * y));
            if let Ok(q) = a.checked_div(b) {
                prop_assert!(q.contains(x / y));
            }
        }

        #[test]
        fn unary_ops_contain_point_results((a, x) in arb_interval(), n in -4i32..6) {
            prop_assert!(a.sin().contains(x.sin()));
            prop_assert!(a.cos().contains(x.cos()));
            if x >= 0.0 {
                prop_assert!(a.sqrt().contains(x.sqrt()));
            }
            if let Ok(p) = a.powi(n) {
                prop_assert!(p.contains(x.powi(n)));
            }
        }
    }
}
