//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` of two
//! `f64`s with `|lo| <= ulp(hi) / 2`, giving roughly 32 significant digits.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::real::{self, Real};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

/// Unit roundoff of double-double arithmetic, `2^-106`.
pub const DD_EPSILON: f64 = 1.232_595_164_407_831e-32;

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const FRAC_PI_2: Self = Self {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123233995736766e-17,
    };
    pub const TAU: Self = Self {
        hi: std::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };
    pub const LN_2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };

    #[inline]
    pub const fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Normalizes an arbitrary pair into non-overlapping form.
    #[inline]
    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact difference of two doubles.
    #[inline]
    pub fn from_diff(a: f64, b: f64) -> Self {
        Self::from_sum(a, -b)
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn ldexp(self, e: i32) -> Self {
        Self {
            hi: real::ldexp(self.hi, e),
            lo: real::ldexp(self.lo, e),
        }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::new(f64::NAN)
            };
        }
        let x = self.hi.sqrt();
        let y = Self::new(x);
        y + (self - Self::from_prod(x, x)) * Self::new(0.5 / x)
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            // hi already integral; round the tail
            let lo = self.lo.round();
            let (hi, lo) = fast_two_sum(hi, lo);
            // ties at exactly .5 of the tail are pushed toward hi's sign; irrelevant here
            return Self { hi, lo };
        }
        if (hi - self.hi).abs() == 0.5 {
            // tie on hi: decide using lo
            let floor = self.hi.floor();
            return if self.lo > 0.0 || (self.lo == 0.0 && self.hi > 0.0) {
                Self::new(floor + 1.0)
            } else {
                Self::new(floor)
            };
        }
        Self::new(hi)
    }

    /// `exp(x) - 1` for tiny `x`, by Taylor series.
    fn expm1_small(x: Self) -> Self {
        let mut term = x;
        let mut sum = x;
        let mut k = 2.0;
        loop {
            term = term * x / Self::new(k);
            sum += term;
            if term.hi.abs() <= sum.hi.abs() * 1e-34 || k > 40.0 {
                break;
            }
            k += 1.0;
        }
        sum
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.8 {
            return Self::new(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        if self.hi == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = self - Self::LN_2 * Self::new(k);
        const SQUARINGS: i32 = 10;
        let mut s = Self::expm1_small(r.ldexp(-SQUARINGS));
        for _ in 0..SQUARINGS {
            // (1 + s)^2 - 1
            s = s * (s + Self::new(2.0));
        }
        (s + Self::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::new(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        let mut y = Self::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    fn sin_taylor(r: Self) -> Self {
        let r2 = r.sqr();
        let mut term = r;
        let mut sum = r;
        let mut k = 1.0;
        loop {
            term = -(term * r2) / Self::new((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
            if term.hi.abs() <= 1e-35 * sum.hi.abs().max(1e-300) || k > 60.0 {
                break;
            }
        }
        sum
    }

    fn cos_taylor(r: Self) -> Self {
        let r2 = r.sqr();
        let mut term = Self::ONE;
        let mut sum = Self::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * r2) / Self::new((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
            if term.hi.abs() <= 1e-35 || k > 60.0 {
                break;
            }
        }
        sum
    }

    /// Reduces by multiples of pi/2, returning the quadrant and remainder.
    fn reduce_half_pi(self) -> (i64, Self) {
        let q = (self / Self::FRAC_PI_2).round();
        let r = self - Self::FRAC_PI_2 * q;
        let quadrant = (q.hi.rem_euclid(4.0) + q.lo.rem_euclid(4.0)) as i64;
        (quadrant, r)
    }

    pub fn sin(self) -> Self {
        if !self.hi.is_finite() {
            return Self::new(f64::NAN);
        }
        if self.hi == 0.0 {
            return self;
        }
        let (q, r) = self.reduce_half_pi();
        match q.rem_euclid(4) {
            0 => Self::sin_taylor(r),
            1 => Self::cos_taylor(r),
            2 => -Self::sin_taylor(r),
            _ => -Self::cos_taylor(r),
        }
    }

    pub fn cos(self) -> Self {
        if !self.hi.is_finite() {
            return Self::new(f64::NAN);
        }
        let (q, r) = self.reduce_half_pi();
        match q.rem_euclid(4) {
            0 => Self::cos_taylor(r),
            1 => -Self::sin_taylor(r),
            2 => -Self::cos_taylor(r),
            _ => Self::sin_taylor(r),
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = fast_two_sum(s1, s2 + t1);
        let (hi, lo) = fast_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = fast_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * Self::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Self::new(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = fast_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::new(q3)
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Real for DoubleDouble {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Self::new(x)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }

    #[inline]
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }

    #[inline]
    fn ldexp(self, e: i32) -> Self {
        DoubleDouble::ldexp(self, e)
    }

    #[inline]
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }

    fn exponent(self) -> i32 {
        real::binary_exponent(self.hi)
    }
}

pub fn dd_add(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
    a + b
}

pub fn dd_mul(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
    a * b
}

pub fn dd_div(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
    a / b
}
