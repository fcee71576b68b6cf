//! Certified real intervals with dyadic endpoints.
//!
//! An [`Interval`] at precision `w` is `[lo / 2^w, hi / 2^w]` with integer
//! endpoints. Every operation rounds the lower endpoint down and the upper
//! endpoint up, so the true value is always enclosed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::int_isqrt;

/// Extra bits carried through series evaluations before final rounding.
const GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn floor_shr(a: &BigInt, s: u32) -> BigInt {
    floor_div(a, &(BigInt::one() << s))
}

fn ceil_shr(a: &BigInt, s: u32) -> BigInt {
    ceil_div(a, &(BigInt::one() << s))
}

impl Interval {
    fn new(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::new(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Interval::new(v.clone(), v, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        Interval::new(floor_div(&scaled, q.denom()), ceil_div(&scaled, q.denom()), prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Largest certified lower bound on `|v|` (zero when straddling 0).
    pub fn abs_lower(&self) -> BigRational {
        if self.is_positive() {
            self.lower()
        } else if self.is_negative() {
            -self.upper()
        } else {
            BigRational::zero()
        }
    }

    pub fn abs_upper(&self) -> BigRational {
        let m = self.lo.abs().max(self.hi.abs());
        BigRational::new(m, BigInt::one() << self.prec)
    }

    /// Rounds outward to a coarser precision, or pads exactly to a finer one.
    pub fn with_precision(&self, prec: u32) -> Interval {
        if prec >= self.prec {
            let s = prec - self.prec;
            Interval::new(&self.lo << s, &self.hi << s, prec)
        } else {
            let s = self.prec - prec;
            Interval::new(floor_shr(&self.lo, s), ceil_shr(&self.hi, s), prec)
        }
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        let p = self.prec.max(other.prec);
        (self.with_precision(p), other.with_precision(p))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::new(a.lo + b.lo, a.hi + b.hi, a.prec)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo, self.prec)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn scale_int(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval::new(b, a, self.prec)
        } else {
            Interval::new(a, b, self.prec)
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> Interval {
        let t = self.scale_int(c.numer());
        Interval::new(floor_div(&t.lo, c.denom()), ceil_div(&t.hi, c.denom()), self.prec)
    }

    /// `sqrt(a)` for a nonnegative integer.
    pub fn sqrt_int(a: &BigInt, prec: u32) -> Result<Interval> {
        let (root, exact) = int_isqrt(&(a << (2 * prec)))?;
        let hi = if exact { root.clone() } else { &root + 1 };
        Ok(Interval::new(root, hi, prec))
    }

    pub fn ln2(prec: u32) -> Interval {
        let w = prec + GUARD_BITS;
        let (lo, hi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
        Interval::new(lo << 1, hi << 1, w).with_precision(prec)
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rational(r: &BigRational, prec: u32) -> Result<Interval> {
        if !r.is_positive() {
            return Err(Error::InvalidInstance("logarithm of a nonpositive number".into()));
        }
        let (n, d) = (r.numer(), r.denom());
        // Reduce to m = r / 2^k in [1/sqrt 2, sqrt 2).
        let mut k: i64 = n.bits() as i64 - d.bits() as i64;
        let scaled = |k: i64| -> (BigInt, BigInt) {
            if k >= 0 {
                (n.clone(), d << k as u64)
            } else {
                (n << (-k) as u64, d.clone())
            }
        };
        let (mut p, mut q) = scaled(k);
        loop {
            if &p * &p >= BigInt::from(2) * &q * &q {
                k += 1;
            } else if BigInt::from(2) * &p * &p < &q * &q {
                k -= 1;
            } else {
                break;
            }
            (p, q) = scaled(k);
        }
        let w = prec + GUARD_BITS + 64 - k.unsigned_abs().leading_zeros();
        let num = &p - &q;
        let den = &p + &q;
        let (alo, ahi) = atanh_fixed(&num.abs(), &den, w);
        let mut atanh = Interval::new(alo << 1, ahi << 1, w);
        if num.is_negative() {
            atanh = atanh.neg();
        }
        let (llo, lhi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
        let ln2 = Interval::new(llo << 1, lhi << 1, w);
        Ok(ln2.scale_int(&BigInt::from(k)).add(&atanh).with_precision(prec))
    }

    /// Midpoint as `f64`, for display only.
    pub fn midpoint_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, BigInt::from(2) << self.prec);
        rational_to_f64(&mid)
    }
}

/// Approximate value of a rational, for display only.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    // Scale to keep both parts within f64 range.
    let shift = q.numer().bits() as i64 - q.denom().bits() as i64;
    let (n, d) = if shift > 0 {
        (q.numer().clone(), q.denom() << (shift as u64))
    } else {
        (q.numer() << ((-shift) as u64), q.denom().clone())
    };
    let mantissa = BigRational::new(n << 64u32, d).to_integer().to_f64().unwrap_or(f64::NAN) / 2f64.powi(64);
    mantissa * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}] @{} bits", rational_to_f64(&self.lower()), rational_to_f64(&self.upper()), self.prec)
    }
}

/// Bounds `(lo, hi)` with `lo <= 2^w atanh(a/b) <= hi`, for `0 <= a < b`
/// with `a/b <= 1/2`.
fn atanh_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    assert!(!a.is_negative() && a < b && BigInt::from(2) * a <= *b, "atanh argument out of range");
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let a2 = a * a;
    let b2 = b * b;
    let scaled = a << w;
    let mut p_lo = floor_div(&scaled, b);
    let mut p_hi = ceil_div(&scaled, b);
    let mut sum_lo = p_lo.clone();
    let mut sum_hi = p_hi.clone();
    let mut k: u64 = 1;
    while p_hi > BigInt::one() {
        p_lo = floor_div(&(&p_lo * &a2), &b2);
        p_hi = ceil_div(&(&p_hi * &a2), &b2);
        let denom = BigInt::from(2 * k + 1);
        sum_lo += floor_div(&p_lo, &denom);
        sum_hi += ceil_div(&p_hi, &denom);
        k += 1;
    }
    // Remaining terms are at most z^(2k+1) / (1 - z^2).
    sum_hi += ceil_div(&(&p_hi * &a2), &(&b2 - &a2));
    (sum_lo, sum_hi)
}
