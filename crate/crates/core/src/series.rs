//! Truncated formal power series over the rationals.
//!
//! A [`TruncatedSeries`] of precision `P` records the coefficients of
//! `x^0 .. x^(P-1)`; everything from `x^P` on is unknown. Every operation
//! returns the largest precision it can prove, so an `AtLeast(P)` order is
//! always a sound statement.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{format_rational, parse_rational, rational_sqrt};

/// Order (valuation) of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum OrderResult {
    /// Coefficient `k` is nonzero and all earlier ones vanish.
    Known(usize),
    /// Every known coefficient vanishes; the order is at least this value.
    AtLeast(usize),
}

impl OrderResult {
    pub fn known(self) -> Option<usize> {
        match self {
            OrderResult::Known(k) => Some(k),
            OrderResult::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Known(k) => write!(f, "{k}"),
            OrderResult::AtLeast(p) => write!(f, ">= {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl TruncatedSeries {
    /// Embeds a polynomial; entries past its degree are exact zeros.
    pub fn from_poly(coeffs: &[BigRational], precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InsufficientPrecision { precision, needed: 1 });
        }
        let support = coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1);
        if precision < coeffs.len() && support > precision {
            return Err(Error::PrecisionTooSmall { precision, needed: support });
        }
        if precision < coeffs.len() {
            // Trailing zeros beyond the precision carry no information.
            return Ok(Self::from_coeffs(coeffs[..precision].to_vec()));
        }
        let mut c = coeffs.to_vec();
        c.resize(precision, BigRational::zero());
        Ok(TruncatedSeries { coeffs: c })
    }

    pub fn from_i64s(coeffs: &[i64], precision: usize) -> Result<Self> {
        let c: Vec<BigRational> = coeffs.iter().map(|&v| rat(v)).collect();
        Self::from_poly(&c, precision)
    }

    /// Series whose known coefficients are exactly `coeffs`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "precision must be at least 1");
        TruncatedSeries { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        Self::from_coeffs(vec![BigRational::zero(); precision.max(1)])
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(BigRational::one(), precision)
    }

    pub fn constant(c: BigRational, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = c;
        s
    }

    /// `c * x^k` at the given precision (zero if `k >= precision`).
    pub fn monomial(c: BigRational, k: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if k < s.precision() {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; `None` past the precision.
    pub fn coeff(&self, k: usize) -> Option<&BigRational> {
        self.coeffs.get(k)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision >= 1 && precision <= self.precision());
        Self::from_coeffs(self.coeffs[..precision].to_vec())
    }

    pub fn order(&self) -> OrderResult {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => OrderResult::Known(k),
            None => OrderResult::AtLeast(self.precision()),
        }
    }

    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        Self::from_coeffs((0..p).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        Self::from_coeffs((0..p).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    /// `sum c_i f_i` at the minimum input precision.
    pub fn linear_combine(coeffs: &[BigRational], series: &[TruncatedSeries]) -> Result<Self> {
        if coeffs.len() != series.len() {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: series.len() });
        }
        if series.is_empty() {
            return Err(Error::EmptyInput);
        }
        let p = series.iter().map(Self::precision).min().expect("nonempty");
        let mut out = vec![BigRational::zero(); p];
        for (c, s) in coeffs.iter().zip(series) {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&s.coeffs) {
                if !a.is_zero() {
                    *o += c * a;
                }
            }
        }
        Ok(Self::from_coeffs(out))
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        let mut out = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs[..p].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..p - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drops the first `k` coefficients (which must vanish): `self / x^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs[..k].iter().all(Zero::is_zero));
        Self::from_coeffs(self.coeffs[k..].to_vec())
    }

    /// Inverse of a series with nonzero constant term, same precision.
    pub fn inverse_unit(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::DivisionIndeterminate);
        }
        let p = self.precision();
        let inv0 = a0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(p);
        out.push(inv0.clone());
        for k in 1..p {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::from_coeffs(out))
    }

    /// `self / divisor`. Dividing by a series of order `k` costs `k`
    /// coefficients of precision.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let k = divisor.order().known().ok_or(Error::DivisionIndeterminate)?;
        let p = self.precision().min(divisor.precision());
        if k >= p {
            return Err(Error::DivisionIndeterminate);
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::QuotientNotPowerSeries);
        }
        let num = self.truncate(p).shift_down(k);
        let den = divisor.truncate(p).shift_down(k);
        Ok(num.mul(&den.inverse_unit()?))
    }

    pub fn derivative(&self) -> Result<Self> {
        let p = self.precision();
        if p < 2 {
            return Err(Error::InsufficientPrecision { precision: p, needed: 2 });
        }
        Ok(Self::from_coeffs(
            (1..p).map(|k| &self.coeffs[k] * rat(k as i64)).collect(),
        ))
    }

    /// Antiderivative with zero constant term; gains one coefficient.
    pub fn integral(&self) -> Self {
        let mut out = Vec::with_capacity(self.precision() + 1);
        out.push(BigRational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c / rat(k as i64 + 1));
        }
        Self::from_coeffs(out)
    }

    /// Square root with positive constant term. The constant term must be a
    /// nonzero rational square.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotSquareConstantTerm);
        }
        let s0 = rational_sqrt(a0).ok_or(Error::NotSquareConstantTerm)?;
        let p = self.precision();
        let two_s0_inv = (&s0 * rat(2)).recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(p);
        out.push(s0);
        for k in 1..p {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &out[i] * &out[k - i];
            }
            out.push(acc * &two_s0_inv);
        }
        Ok(Self::from_coeffs(out))
    }

    /// `exp(self)` for a series with zero constant term, from `y' = a' y`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let p = self.precision();
        let mut out: Vec<BigRational> = Vec::with_capacity(p);
        out.push(BigRational::one());
        for k in 1..p {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j] * rat(j as i64);
                }
            }
            out.push(acc / rat(k as i64));
        }
        Ok(Self::from_coeffs(out))
    }

    /// `log(self)` for a series with constant term one, as `∫ a'/a`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstantTerm);
        }
        if self.precision() == 1 {
            return Ok(Self::zero(1));
        }
        let ratio = self.derivative()?.mul(&self.inverse_unit()?);
        Ok(ratio.integral())
    }

    /// `self^alpha` for a series with constant term one, from
    /// `a y' = alpha a' y`.
    pub fn pow_rat(&self, alpha: &BigRational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstantTerm);
        }
        let p = self.precision();
        let mut out: Vec<BigRational> = Vec::with_capacity(p);
        out.push(BigRational::one());
        for k in 1..p {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let weight = alpha * rat(j as i64) - rat((k - j) as i64);
                acc += weight * &self.coeffs[j] * &out[k - j];
            }
            out.push(acc / rat(k as i64));
        }
        Ok(Self::from_coeffs(out))
    }

    /// `(sin(self), cos(self))` for a series with zero constant term, from
    /// the coupled system `s' = a' c`, `c' = -a' s`.
    pub fn sin_cos(&self) -> Result<(Self, Self)> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let p = self.precision();
        let mut s: Vec<BigRational> = vec![BigRational::zero()];
        let mut c: Vec<BigRational> = vec![BigRational::one()];
        for k in 1..p {
            let mut sk = BigRational::zero();
            let mut ck = BigRational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = &self.coeffs[j] * rat(j as i64);
                sk += &w * &c[k - j];
                ck -= &w * &s[k - j];
            }
            s.push(sk / rat(k as i64));
            c.push(ck / rat(k as i64));
        }
        Ok((Self::from_coeffs(s), Self::from_coeffs(c)))
    }

    /// `(sinh(self), cosh(self))` for a series with zero constant term.
    pub fn sinh_cosh(&self) -> Result<(Self, Self)> {
        let ep = self.exp()?;
        let em = self.neg().exp()?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Ok((ep.sub(&em).scale(&half), ep.add(&em).scale(&half)))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            coeffs: self.coeffs.iter().map(format_rational).collect(),
            precision: self.precision(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        let coeffs = json
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_poly(&coeffs, json.precision)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = format_rational(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*x")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.precision())
    }
}

/// Wire format: coefficients as `"p/q"` strings plus the precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub coeffs: Vec<String>,
    pub precision: usize,
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::numerics::serde_str::rat_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::numerics::serde_str::rat_vec::deserialize(d).map(Polynomial::new)
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&v| rat(v)).collect())
    }

    pub fn parse(coeffs: &[String]) -> Result<Self> {
        Ok(Self::new(
            coeffs.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
        ))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Order of the polynomial; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn to_series(&self, precision: usize) -> Result<TruncatedSeries> {
        TruncatedSeries::from_poly(&self.coeffs, precision)
    }

    /// Like [`to_series`](Self::to_series) but silently truncates.
    pub fn to_series_truncated(&self, precision: usize) -> TruncatedSeries {
        let mut c: Vec<BigRational> = self.coeffs.iter().take(precision).cloned().collect();
        c.resize(precision.max(1), BigRational::zero());
        TruncatedSeries::from_coeffs(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ts(c: &[i64], p: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64s(c, p).unwrap()
    }

    fn tsq(c: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn from_poly_examples() {
        assert_eq!(ts(&[1, 2], 4).coeffs(), &[rat(1), rat(2), rat(0), rat(0)]);
        let z = TruncatedSeries::from_poly(&[], 1).unwrap();
        assert_eq!(z.precision(), 1);
        assert_eq!(z.order(), OrderResult::AtLeast(1));
        assert_eq!(ts(&[0, 0, 5], 3).order(), OrderResult::Known(2));
        assert!(matches!(
            TruncatedSeries::from_i64s(&[1, 2, 3], 2),
            Err(Error::PrecisionTooSmall { .. })
        ));
        assert_eq!(ts(&[1, 2, 0, 0], 2).precision(), 2);
    }

    #[test]
    fn linear_combine_examples() {
        let a = ts(&[1, 1], 4);
        let b = ts(&[1, 1, 1], 4);
        let z = TruncatedSeries::linear_combine(&[rat(1), rat(-1)], &[a.clone(), a.clone()]).unwrap();
        assert_eq!(z.order(), OrderResult::AtLeast(4));
        let id = TruncatedSeries::linear_combine(&[rat(1)], &[a.clone()]).unwrap();
        assert_eq!(id, a);
        let d = TruncatedSeries::linear_combine(&[rat(1), rat(-1)], &[a.clone(), b]).unwrap();
        assert_eq!(d, ts(&[0, 0, -1], 4));
        assert_eq!(d.order(), OrderResult::Known(2));
        assert!(matches!(
            TruncatedSeries::linear_combine(&[rat(1)], &[a.clone(), a]),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(TruncatedSeries::linear_combine(&[], &[]), Err(Error::EmptyInput));
    }

    #[test]
    fn linear_combine_uses_min_precision() {
        let s = TruncatedSeries::linear_combine(&[rat(1), rat(1)], &[ts(&[1], 3), ts(&[1], 5)]).unwrap();
        assert_eq!(s.precision(), 3);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ts(&[1, 1], 3).mul(&ts(&[1, -1], 3)), ts(&[1, 0, -1], 3));
        assert_eq!(ts(&[0, 1], 3).mul(&ts(&[0, 1], 3)), ts(&[0, 0, 1], 3));
        let a = ts(&[1, 1], 4);
        assert_eq!(a.mul(&a).mul(&ts(&[1, 2], 4)), ts(&[1, 4, 5, 2], 4));
        assert_eq!(ts(&[1], 3).mul(&ts(&[1], 5)).precision(), 3);
    }

    #[test]
    fn div_examples() {
        assert_eq!(ts(&[1], 4).div(&ts(&[1, -1], 4)).unwrap(), ts(&[1, 1, 1, 1], 4));
        let r = ts(&[0, 0, 1], 4).div(&ts(&[0, 1], 4)).unwrap();
        assert_eq!(r, ts(&[0, 1], 3));
        assert_eq!(r.precision(), 3);
        let r = ts(&[1, 2], 3).div(&ts(&[1, 1], 3)).unwrap();
        assert_eq!(r, ts(&[1, 1, -1], 3));
        assert_eq!(r.mul(&ts(&[1, 1], 3)), ts(&[1, 2], 3));
        assert_eq!(ts(&[1], 3).div(&ts(&[], 3)), Err(Error::DivisionIndeterminate));
        assert_eq!(ts(&[1], 3).div(&ts(&[0, 1], 3)), Err(Error::QuotientNotPowerSeries));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ts(&[1, 1, 1], 3).derivative().unwrap(), ts(&[1, 2], 2));
        assert!(ts(&[5], 4).derivative().unwrap().is_zero_within_precision());
        let cube = TruncatedSeries::monomial(q(1, 6), 3, 5);
        assert_eq!(cube.derivative().unwrap(), TruncatedSeries::monomial(q(1, 2), 2, 4));
        assert!(matches!(ts(&[1], 1).derivative(), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn order_examples() {
        assert_eq!(ts(&[0, 2, 1], 4).order(), OrderResult::Known(1));
        assert_eq!(TruncatedSeries::zero(8).order(), OrderResult::AtLeast(8));
        assert_eq!(ts(&[0, 0, 1, -2], 4).order(), OrderResult::Known(2));
    }

    #[test]
    fn sqrt_examples() {
        let r = ts(&[1, 2], 4).sqrt().unwrap();
        assert_eq!(r, tsq(&[(1, 1), (1, 1), (-1, 2), (1, 2)]));
        assert_eq!(r.mul(&r), ts(&[1, 2], 4));
        assert_eq!(ts(&[1, 2, 1], 4).sqrt().unwrap(), ts(&[1, 1], 4));
        assert_eq!(ts(&[4], 3).sqrt().unwrap(), ts(&[2], 3));
        assert_eq!(ts(&[2, 1], 3).sqrt(), Err(Error::NotSquareConstantTerm));
        assert_eq!(ts(&[0, 1], 3).sqrt(), Err(Error::NotSquareConstantTerm));
        let nine_quarters = TruncatedSeries::constant(q(9, 4), 2);
        assert_eq!(nine_quarters.sqrt().unwrap().coeff(0), Some(&q(3, 2)));
    }

    #[test]
    fn exp_examples() {
        let e = ts(&[0, 1], 5).exp().unwrap();
        assert_eq!(e, tsq(&[(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)]));
        assert_eq!(TruncatedSeries::zero(3).exp().unwrap(), ts(&[1], 3));
        assert_eq!(ts(&[0, 0, 1], 5).exp().unwrap(), tsq(&[(1, 1), (0, 1), (1, 1), (0, 1), (1, 2)]));
        assert_eq!(ts(&[1], 3).exp(), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn log_examples() {
        let l = ts(&[1, 1], 4).log().unwrap();
        assert_eq!(l, tsq(&[(0, 1), (1, 1), (-1, 2), (1, 3)]));
        assert!(ts(&[1], 4).log().unwrap().is_zero_within_precision());
        assert_eq!(l.exp().unwrap(), ts(&[1, 1], 4));
        assert_eq!(ts(&[2, 1], 4).log(), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn pow_rat_examples() {
        let h = ts(&[1, 1], 3).pow_rat(&q(1, 2)).unwrap();
        assert_eq!(h, tsq(&[(1, 1), (1, 2), (-1, 8)]));
        assert_eq!(ts(&[1, 1], 3).pow_rat(&rat(0)).unwrap(), ts(&[1], 3));
        let c = ts(&[1, 1], 6).pow_rat(&q(1, 3)).unwrap();
        assert_eq!(c.pow(3), ts(&[1, 1], 6));
        assert_eq!(ts(&[3, 1], 3).pow_rat(&q(1, 2)), Err(Error::NonUnitConstantTerm));
        // Integer exponents reduce to ordinary powers.
        assert_eq!(ts(&[1, 1], 5).pow_rat(&rat(3)).unwrap(), ts(&[1, 3, 3, 1], 5));
        assert_eq!(ts(&[1, 1], 4).pow_rat(&rat(-1)).unwrap(), ts(&[1, -1, 1, -1], 4));
    }

    #[test]
    fn sin_cos_of_x() {
        let (s, c) = ts(&[0, 1], 6).sin_cos().unwrap();
        assert_eq!(s, tsq(&[(0, 1), (1, 1), (0, 1), (-1, 6), (0, 1), (1, 120)]));
        assert_eq!(c, tsq(&[(1, 1), (0, 1), (-1, 2), (0, 1), (1, 24), (0, 1)]));
        let (sh, ch) = ts(&[0, 1], 4).sinh_cosh().unwrap();
        assert_eq!(sh, tsq(&[(0, 1), (1, 1), (0, 1), (1, 6)]));
        assert_eq!(ch, tsq(&[(1, 1), (0, 1), (1, 2), (0, 1)]));
    }

    #[test]
    fn json_round_trip_and_display() {
        let s = tsq(&[(1, 1), (-1, 2), (0, 1)]);
        let json = s.to_json();
        assert_eq!(json.coeffs, vec!["1", "-1/2", "0"]);
        assert_eq!(TruncatedSeries::from_json(&json).unwrap(), s);
        assert_eq!(s.to_string(), "1 - 1/2*x + O(x^3)");
        assert_eq!(TruncatedSeries::zero(2).to_string(), "0 + O(x^2)");
    }

    #[test]
    fn polynomial_basics() {
        let p = Polynomial::from_i64s(&[1, 1]);
        let r = Polynomial::from_i64s(&[1, -1]);
        assert_eq!(p.mul(&r), Polynomial::from_i64s(&[1, 0, -1]));
        assert_eq!(p.sub(&p), Polynomial::default());
        assert_eq!(Polynomial::from_i64s(&[3, 0, 2, 0]).degree(), 2);
        assert_eq!(Polynomial::from_i64s(&[0, 0, 2]).order(), Some(2));
        assert_eq!(Polynomial::from_i64s(&[1, 1, 1]).derivative(), Polynomial::from_i64s(&[1, 2]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series_strategy(p: usize) -> impl Strategy<Value = TruncatedSeries> {
            proptest::collection::vec((-5i64..=5, 1i64..=4), p)
                .prop_map(|v| TruncatedSeries::from_coeffs(v.into_iter().map(|(n, d)| q(n, d)).collect()))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn order_is_additive(a in series_strategy(10), b in series_strategy(10)) {
                if let (Some(j), Some(k)) = (a.order().known(), b.order().known()) {
                    let prod = a.mul(&b);
                    if j + k < prod.precision() {
                        prop_assert_eq!(prod.order(), OrderResult::Known(j + k));
                    }
                }
            }

            #[test]
            fn sqrt_resquares(tail in series_strategy(8), c0 in 1i64..=6, d0 in 1i64..=6) {
                let mut coeffs = tail.coeffs().to_vec();
                coeffs[0] = q(c0 * c0, d0 * d0);
                let a = TruncatedSeries::from_coeffs(coeffs);
                let r = a.sqrt().unwrap();
                prop_assert_eq!(r.mul(&r), a);
            }

            #[test]
            fn exp_log_round_trip(tail in series_strategy(8)) {
                let mut coeffs = tail.coeffs().to_vec();
                coeffs[0] = BigRational::zero();
                let b = TruncatedSeries::from_coeffs(coeffs.clone());
                prop_assert_eq!(b.exp().unwrap().log().unwrap(), b.clone());
                coeffs[0] = BigRational::one();
                let a = TruncatedSeries::from_coeffs(coeffs);
                prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
            }

            #[test]
            fn derivative_lowers_order(a in series_strategy(9)) {
                let d = a.derivative().unwrap();
                if let OrderResult::Known(k) = a.order() {
                    if k >= 1 {
                        prop_assert_eq!(d.order(), OrderResult::Known(k - 1));
                    }
                    if let OrderResult::Known(j) = d.order() {
                        prop_assert!(k <= j + 1);
                    }
                }
                prop_assert!(d.precision() == a.precision() - 1);
            }

            #[test]
            fn pow_rat_satisfies_ode(tail in series_strategy(7), an in -4i64..=4, ad in 1i64..=4) {
                let mut coeffs = tail.coeffs().to_vec();
                coeffs[0] = BigRational::one();
                let a = TruncatedSeries::from_coeffs(coeffs);
                let alpha = q(an, ad);
                let y = a.pow_rat(&alpha).unwrap();
                // a y' - alpha a' y vanishes within precision - 1.
                let lhs = a.mul(&y.derivative().unwrap());
                let rhs = a.derivative().unwrap().mul(&y).scale(&alpha);
                prop_assert!(lhs.sub(&rhs).is_zero_within_precision());
            }
        }
    }
}
