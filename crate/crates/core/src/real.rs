//! Scalar abstraction shared by the working-precision (`f64`) and the
//! double-double shadow computations.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn abs(self) -> Self;

    /// Multiplies by `2^e`. Exact unless the result leaves the normal range.
    fn ldexp(self, e: i32) -> Self;

    fn is_finite(self) -> bool;

    /// Binary exponent of the leading component, `0` for zero or non-finite.
    fn exponent(self) -> i32 {
        binary_exponent(self.to_f64())
    }
}

/// Exponent `e` with `2^e <= |x| < 2^(e+1)` for normal `x`.
pub fn binary_exponent(x: f64) -> i32 {
    if x == 0.0 || !x.is_finite() {
        return 0;
    }
    let bits = x.abs().to_bits();
    let biased = (bits >> 52) as i32;
    if biased == 0 {
        // subnormal
        let mant = bits & ((1u64 << 52) - 1);
        -1011 - mant.leading_zeros() as i32
    } else {
        biased - 1023
    }
}

/// `x * 2^e`, applied in steps so the intermediate factors stay representable.
pub fn ldexp(mut x: f64, mut e: i32) -> f64 {
    const STEP: i32 = 1000;
    while e > STEP {
        x *= f64::from_bits(((1023 + STEP) as u64) << 52);
        e -= STEP;
    }
    while e < -STEP {
        x *= f64::from_bits(((1023 - STEP) as u64) << 52);
        e += STEP;
    }
    x * f64::from_bits(((1023 + e) as u64) << 52)
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    #[inline]
    fn ldexp(self, e: i32) -> Self {
        ldexp(self, e)
    }

    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_of_powers_of_two() {
        assert_eq!(binary_exponent(1.0), 0);
        assert_eq!(binary_exponent(0.75), -1);
        assert_eq!(binary_exponent(-1024.0), 10);
        assert_eq!(binary_exponent(f64::MIN_POSITIVE), -1022);
        assert_eq!(binary_exponent(f64::MIN_POSITIVE / 8.0), -1025);
    }

    #[test]
    fn ldexp_large_shifts() {
        assert_eq!(ldexp(1.5, 3), 12.0);
        assert_eq!(ldexp(ldexp(3.0, 1020), -1020), 3.0);
        assert_eq!(ldexp(ldexp(3.0, -1020), 1020), 3.0);
        assert_eq!(ldexp(1.0, 1024), f64::INFINITY);
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
    }
}
