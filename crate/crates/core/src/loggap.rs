//! Sums of logarithms: the order of `sum c_i log f_i` for polynomials
//! `f_i`, and certified lower bounds for `E = sum c_i log a_i` when each
//! `a_i = X^{d_i} + b_1 X^{d_i - 1} + ... + b_{d_i}` is a polynomial in a
//! large integer `X`.
//!
//! Writing `y = 1/X`, `log a_i = d_i log X + h_i(y)` with
//! `h_i(y) = log(1 + b_1 y + ... + b_{d_i} y^{d_i}) = sum_j h_{i,j} y^j`, so
//! `E = A log X + sum_j S_j` with `A = sum c_i d_i` and
//! `S_j = y^j sum_i c_i h_{i,j}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numerics::{factorial, serde_str};
use crate::ode_sum::{BoundReport, BoundStatus};
use crate::series::{OrderResult, Polynomial, TruncatedSeries};

/// Largest working precision for certified evaluation.
pub const PRECISION_CAP_BITS: u32 = 1 << 16;
/// Exact cancellation of `prod a_i^{c_i}` is tested up to this size.
const EXACT_PRODUCT_BITS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogSumOrderReport {
    #[serde(flatten)]
    pub report: BoundReport,
    /// Order from `S'` as an exact rational function.
    pub derivative_route: OrderResult,
    /// Order from the truncated series; absent when `S(0) != 0`.
    pub series_route: Option<OrderResult>,
    pub routes_agree: bool,
}

/// `prod_i r_i^{e_i} == 1` for positive rationals and integer exponents.
fn product_is_one(bases: &[BigRational], exps: &[BigInt]) -> Result<bool> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut bits: u64 = 0;
    for (r, e) in bases.iter().zip(exps) {
        let k = e.abs().to_u32().ok_or_else(|| Error::InvalidInstance("exponent too large".into()))?;
        bits = bits.saturating_add(u64::from(k).saturating_mul(r.numer().bits() + r.denom().bits()));
        if bits > EXACT_PRODUCT_BITS {
            return Err(Error::InvalidInstance("exact constant-term test exceeds size limit".into()));
        }
        let (p, q) = (r.numer().pow(k), r.denom().pow(k));
        if e.is_negative() {
            num *= q;
            den *= p;
        } else {
            num *= p;
            den *= q;
        }
    }
    Ok(num == den)
}

/// Order of `S = sum c_i log f_i` against the bound `n d`, `d` the
/// largest degree.
///
/// The constant term `sum c_i log f_i(0)` vanishes exactly when
/// `prod f_i(0)^{L c_i} = 1` (`L` clearing denominators). Beyond it,
/// `S' = N / prod f_i` with `N = sum c_i f_i' prod_{j != i} f_j`, so
/// `ord S = ord N + 1`. The series route recomputes the order from
/// `sum c_i log(f_i / f_i(0))` truncated at `precision`.
pub fn log_sum_order(c: &[BigRational], f: &[Polynomial], precision: usize) -> Result<LogSumOrderReport> {
    if c.is_empty() {
        return Err(Error::EmptyInput);
    }
    if c.len() != f.len() {
        return Err(Error::LengthMismatch { left: c.len(), right: f.len() });
    }
    let consts: Vec<BigRational> = f.iter().map(Polynomial::constant_term).collect();
    if consts.iter().any(|k| !k.is_positive()) {
        return Err(Error::InvalidInstance("every f_i(0) must be positive".into()));
    }
    let n = f.len();
    let d = f.iter().map(Polynomial::degree).max().unwrap_or(0);
    let bound = n * d;
    let precision = precision.max(bound + 2);

    let lcm = c.iter().fold(BigInt::one(), |acc, ci| acc.lcm(ci.denom()));
    let exps: Vec<BigInt> = c.iter().map(|ci| (ci * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let constant_vanishes = product_is_one(&consts, &exps)?;

    let mut numer = Polynomial::default();
    for i in 0..n {
        let mut term = f[i].derivative().scale(&c[i]);
        for (j, fj) in f.iter().enumerate() {
            if j != i {
                term = term.mul(fj);
            }
        }
        numer = numer.add(&term);
    }
    let derivative_route = if !constant_vanishes {
        OrderResult::Known(0)
    } else {
        match numer.order() {
            Some(k) => OrderResult::Known(k + 1),
            None => OrderResult::AtLeast(precision),
        }
    };

    let series_route = if constant_vanishes {
        let mut acc = TruncatedSeries::zero(precision);
        for (ci, (fi, k)) in c.iter().zip(f.iter().zip(&consts)) {
            let normalized = fi.scale(&k.recip()).to_series_truncated(precision);
            acc = acc.add(&normalized.log()?.scale(ci));
        }
        Some(acc.order())
    } else {
        None
    };

    let routes_agree = match (&series_route, derivative_route) {
        (None, _) => true,
        (Some(OrderResult::Known(a)), OrderResult::Known(b)) => *a == b,
        (Some(OrderResult::AtLeast(p)), OrderResult::Known(b)) => b >= *p,
        (Some(OrderResult::AtLeast(_)), OrderResult::AtLeast(_)) => true,
        (Some(OrderResult::Known(_)), OrderResult::AtLeast(_)) => false,
    };
    let mut report = BoundReport::classify(derivative_route, bound, precision);
    if numer.is_zero() && constant_vanishes {
        report.status = BoundStatus::ZeroSum;
    }
    Ok(LogSumOrderReport { report, derivative_route, series_route, routes_agree })
}

/// Smallest integers `p1 >= 20 dn ln(dn)` and `p2 >= 1 + dn (ln(dn) + 1)`.
pub fn gap_exponents(n: u64, d: u64) -> Result<(u64, u64)> {
    if n == 0 || d == 0 {
        return Err(Error::Degenerate("n and d must be positive".into()));
    }
    let dn = BigInt::from(n) * d;
    if dn.is_one() {
        return Err(Error::Degenerate("dn = 1 makes log(dn) vanish".into()));
    }
    let mut prec = 64;
    loop {
        let ln = Interval::ln_rational(&BigRational::from_integer(dn.clone()), prec)?;
        let v1 = ln.scale_int(&(BigInt::from(20) * &dn));
        let v2 = ln.add(&Interval::from_int(&BigInt::one(), prec)).scale_int(&dn).add(&Interval::from_int(&BigInt::one(), prec));
        let c1 = (v1.lower().ceil(), v1.upper().ceil());
        let c2 = (v2.lower().ceil(), v2.upper().ceil());
        // ln(dn) is irrational for dn >= 2, so the ceilings settle.
        if c1.0 == c1.1 && c2.0 == c2.1 && v1.lower() != c1.0 && v2.lower() != c2.0 {
            let p1 = c1.0.to_integer().to_u64().ok_or_else(|| Error::Degenerate("p1 overflow".into()))?;
            let p2 = c2.0.to_integer().to_u64().ok_or_else(|| Error::Degenerate("p2 overflow".into()))?;
            return Ok((p1, p2));
        }
        prec *= 2;
        if prec > PRECISION_CAP_BITS {
            return Err(Error::Unresolved);
        }
    }
}

/// Coefficient of `y^j` in `log(1 + b_1 y + ... + b_k y^k)` from the
/// truncated series logarithm.
pub fn coeff_hij_series(b: &[BigInt], j: usize) -> Result<BigRational> {
    let mut coeffs = vec![BigRational::one()];
    coeffs.extend(b.iter().map(|v| BigRational::from_integer(v.clone())));
    let f = Polynomial::new(coeffs).to_series_truncated(j + 1);
    Ok(f.log()?.coeff(j).cloned().unwrap_or_else(BigRational::zero))
}

/// The same coefficient from the Mercator series and the multinomial
/// theorem: `sum_k (-1)^{k+1}/k v_k`, where `v_k` sums
/// `k!/(k_1! ... k_m!) prod b_m^{k_m}` over `k_1 + ... + k_m = k` and
/// `k_1 + 2 k_2 + ... + m k_m = j`.
pub fn coeff_hij_multinomial(b: &[BigInt], j: usize) -> BigRational {
    let mut v = vec![BigInt::zero(); j + 1];
    let mut counts = vec![0usize; b.len()];
    compositions(b, j, 0, &mut counts, &mut v);
    let mut acc = BigRational::zero();
    for (k, vk) in v.iter().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc += BigRational::new(vk * sign, BigInt::from(k));
    }
    acc
}

fn compositions(b: &[BigInt], remaining: usize, m: usize, counts: &mut [usize], v: &mut [BigInt]) {
    if remaining == 0 {
        let k: usize = counts.iter().sum();
        let mut term = factorial(k as u64);
        for (bm, &km) in b.iter().zip(counts.iter()) {
            term = term / factorial(km as u64) * bm.pow(km as u32);
        }
        v[k] += term;
        return;
    }
    if m == b.len() {
        return;
    }
    let weight = m + 1;
    for km in 0..=remaining / weight {
        counts[m] = km;
        compositions(b, remaining - km * weight, m + 1, counts, v);
    }
    counts[m] = 0;
}

/// Both routes for `h_{i,j}`.
pub fn coeff_hij(b: &[BigInt], j: usize) -> Result<(BigRational, BigRational)> {
    if j == 0 {
        return Err(Error::InvalidInstance("j must be at least 1".into()));
    }
    Ok((coeff_hij_series(b, j)?, coeff_hij_multinomial(b, j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogTerm {
    #[serde(with = "serde_str::int")]
    pub c: BigInt,
    #[serde(with = "serde_str::int_vec")]
    pub b: Vec<BigInt>,
}

impl LogTerm {
    pub fn degree(&self) -> usize {
        self.b.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSumInstance {
    #[serde(with = "serde_str::int")]
    pub x: BigInt,
    pub terms: Vec<LogTerm>,
}

impl LogSumInstance {
    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::EmptyInput);
        }
        if self.x < BigInt::from(2) {
            return Err(Error::InvalidInstance("X must be at least 2".into()));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.b.is_empty() {
                return Err(Error::InvalidInstance(format!("term {} has degree 0", i + 1)));
            }
            if !self.a(i).is_positive() {
                return Err(Error::InvalidInstance(format!("a_{} is not positive", i + 1)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.terms.len()
    }

    /// `max |b| ` floored at 1.
    pub fn big_b(&self) -> BigInt {
        self.terms.iter().flat_map(|t| t.b.iter().map(Signed::abs)).fold(BigInt::one(), |m, v| m.max(v))
    }

    pub fn big_c(&self) -> BigInt {
        self.terms.iter().map(|t| t.c.abs()).max().unwrap_or_default()
    }

    /// `max d_i + 1`.
    pub fn d(&self) -> usize {
        self.max_degree() + 1
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(LogTerm::degree).max().unwrap_or(0)
    }

    pub fn a(&self, i: usize) -> BigInt {
        let t = &self.terms[i];
        t.b.iter().fold(BigInt::one(), |acc, bj| acc * &self.x + bj)
    }

    /// `A = sum c_i d_i`.
    pub fn big_a(&self) -> BigInt {
        self.terms.iter().map(|t| &t.c * t.degree()).sum()
    }

    /// `X > C^2` and `X > (B + 1)^{p1}`.
    pub fn preconditions(&self, p1: u64) -> (bool, bool) {
        let c = self.big_c();
        let c2 = self.x > &c * &c;
        let b1 = p1
            .to_u32()
            .map(|p| self.x > (self.big_b() + BigInt::one()).pow(p))
            .unwrap_or(false);
        (c2, b1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SjReport {
    pub j_max: usize,
    /// `sum_i c_i h_{i,j}` for `j = 1..=j_max`; `S_j` is this times `y^j`.
    #[serde(with = "serde_str::rat_vec")]
    pub coefficients: Vec<BigRational>,
    pub upper_bound_failures: Vec<usize>,
    pub ell: Option<usize>,
    pub ell_bound: usize,
    pub ell_within_bound: bool,
    pub integrality_holds: bool,
    pub lower_bound_holds: bool,
    pub preconditions_met: bool,
    /// `(t, holds)` for each checked `|S_{l+t}| / |S_l| <= 2^-(t+1)`.
    pub goal_checks: Vec<(usize, bool)>,
}

impl SjReport {
    pub fn all_hold(&self) -> bool {
        self.upper_bound_failures.is_empty()
            && self.ell.is_some()
            && self.ell_within_bound
            && self.integrality_holds
            && self.lower_bound_holds
            && self.goal_checks.iter().all(|&(_, ok)| ok)
    }
}

/// Exact checks on `S_j` in the `A = 0` case.
pub fn sj_bounds_check(instance: &LogSumInstance, j_max: usize) -> Result<SjReport> {
    instance.validate()?;
    if !instance.big_a().is_zero() {
        return Err(Error::WrongBranch);
    }
    let n = instance.n();
    let ell_bound = n * instance.max_degree();
    let top = j_max.max(ell_bound);
    let mut coefficients = Vec::with_capacity(top);
    for j in 1..=top {
        let mut acc = BigRational::zero();
        for t in &instance.terms {
            acc += coeff_hij_series(&t.b, j)? * BigRational::from_integer(t.c.clone());
        }
        coefficients.push(acc);
    }
    let y = BigRational::new(BigInt::one(), instance.x.clone());
    let s = |j: usize| -> BigRational { &coefficients[j - 1] * y.pow(j as i32) };

    let bd = BigRational::from_integer(instance.big_b() * instance.d());
    let nc = BigRational::from_integer(instance.big_c() * n);
    let upper_bound_failures = (1..=j_max)
        .filter(|&j| s(j).abs() > y.pow(j as i32) * &nc * bd.pow(j as i32 + 1))
        .collect();

    let ell = (1..=top).find(|&j| !coefficients[j - 1].is_zero());
    let (p1, _) = gap_exponents(n as u64, instance.d() as u64)?;
    let (c2, b1) = instance.preconditions(p1);
    let preconditions_met = c2 && b1;
    let mut report = SjReport {
        j_max,
        coefficients: coefficients[..j_max].to_vec(),
        upper_bound_failures,
        ell,
        ell_bound,
        ell_within_bound: false,
        integrality_holds: false,
        lower_bound_holds: false,
        preconditions_met,
        goal_checks: Vec::new(),
    };
    if let Some(l) = ell {
        let fact = BigRational::from_integer(factorial(l as u64));
        report.ell_within_bound = l <= ell_bound;
        report.integrality_holds = (&coefficients[l - 1] * &fact).is_integer();
        let s_l = s(l).abs();
        report.lower_bound_holds = s_l >= y.pow(l as i32) / &fact;
        if preconditions_met {
            report.goal_checks = (1..=j_max.saturating_sub(l))
                .map(|t| {
                    let ratio = s(l + t).abs() / &s_l;
                    (t, ratio <= BigRational::new(BigInt::one(), BigInt::one() << (t + 1)))
                })
                .collect();
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    AZero,
    ANonzero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub branch: Branch,
    #[serde(with = "serde_str::int")]
    pub a_value: BigInt,
    pub n: usize,
    pub d: usize,
    pub p1: u64,
    pub p2: u64,
    pub exponents_minimal: bool,
    pub x_exceeds_c_squared: bool,
    pub x_exceeds_b_plus_one_pow_p1: bool,
    pub preconditions_met: bool,
    #[serde(with = "serde_str::rat")]
    pub abs_e_lower_certified: BigRational,
    #[serde(with = "serde_str::rat")]
    pub abs_e_upper_certified: BigRational,
    /// `X^-p2`.
    #[serde(with = "serde_str::rat")]
    pub threshold: BigRational,
    pub gap_holds: bool,
    /// `|E| >= (1/2) log X`, certified; only for the `A != 0` branch.
    pub half_log_x_holds: Option<bool>,
    pub precision_bits: u32,
}

impl GapReport {
    pub fn summary(&self) -> String {
        format!(
            "branch {:?}, p1 {}, p2 {}, |E| >= {:e}, gap_holds {}",
            self.branch,
            self.p1,
            self.p2,
            crate::interval::rational_to_f64(&self.abs_e_lower_certified),
            self.gap_holds
        )
    }
}

/// Exact `(prod_{c_i > 0} a_i^{c_i}, prod_{c_i < 0} a_i^{-c_i})`, when small
/// enough to form.
fn exact_ratio(instance: &LogSumInstance) -> Option<(BigInt, BigInt)> {
    let mut bits: u64 = 0;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, t) in instance.terms.iter().enumerate() {
        let a = instance.a(i);
        let k = t.c.abs().to_u32()?;
        bits = bits.saturating_add(a.bits().saturating_mul(u64::from(k)));
        if bits > EXACT_PRODUCT_BITS {
            return None;
        }
        if t.c.is_negative() {
            den *= a.pow(k);
        } else {
            num *= a.pow(k);
        }
    }
    Some((num, den))
}

/// Certified check of `|E| >= X^-p2`, doubling precision from
/// `initial_precision_bits` until the enclosure of `E` excludes zero and
/// decides the comparison.
pub fn gap_verify(instance: &LogSumInstance, initial_precision_bits: u32) -> Result<GapReport> {
    instance.validate()?;
    let n = instance.n();
    let d = instance.d();
    let (p1, p2) = gap_exponents(n as u64, d as u64)?;
    let (c2, b1) = instance.preconditions(p1);
    let a_value = instance.big_a();
    let branch = if a_value.is_zero() { Branch::AZero } else { Branch::ANonzero };
    let p2_u32 = p2.to_u32().ok_or_else(|| Error::Degenerate("p2 too large".into()))?;
    let threshold = BigRational::new(BigInt::one(), instance.x.pow(p2_u32));

    let ratio = exact_ratio(instance);
    if let Some((num, den)) = &ratio {
        if num == den {
            return Err(Error::Unresolved);
        }
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut prec = initial_precision_bits.clamp(64, PRECISION_CAP_BITS);
    let mut last: Option<(Interval, Option<bool>)> = None;
    loop {
        let e = match &ratio {
            Some((num, den)) => Interval::ln_rational(&BigRational::new(num.clone(), den.clone()), prec)?,
            None => {
                let mut acc = Interval::zero(prec);
                for (i, t) in instance.terms.iter().enumerate() {
                    let ln = Interval::ln_rational(&BigRational::from_integer(instance.a(i)), prec)?;
                    acc = acc.add(&ln.scale_int(&t.c));
                }
                acc
            }
        };
        if !e.contains_zero() {
            let lower = e.abs_lower();
            let gap_decided = lower >= threshold || e.abs_upper() < threshold;
            let half_log = if branch == Branch::ANonzero {
                let ln_x = Interval::ln_rational(&BigRational::from_integer(instance.x.clone()), prec)?.scale_rat(&half);
                if lower >= ln_x.upper() {
                    Some(Some(true))
                } else if e.abs_upper() < ln_x.lower() {
                    Some(Some(false))
                } else {
                    Some(None)
                }
            } else {
                None
            };
            let half_decided = !matches!(half_log, Some(None));
            let half_value = half_log.map(|h| h.unwrap_or(false));
            if (gap_decided && half_decided) || prec >= PRECISION_CAP_BITS {
                return Ok(build_report(instance, branch, a_value, (p1, p2), (c2, b1), &e, threshold, half_value));
            }
            last = Some((e, half_value));
        }
        if prec >= PRECISION_CAP_BITS {
            return match last {
                Some((e, h)) => Ok(build_report(instance, branch, a_value, (p1, p2), (c2, b1), &e, threshold, h)),
                None => Err(Error::Unresolved),
            };
        }
        prec = (prec * 2).min(PRECISION_CAP_BITS);
    }
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    instance: &LogSumInstance,
    branch: Branch,
    a_value: BigInt,
    (p1, p2): (u64, u64),
    (c2, b1): (bool, bool),
    e: &Interval,
    threshold: BigRational,
    half_log_x_holds: Option<bool>,
) -> GapReport {
    let lower = e.abs_lower();
    GapReport {
        branch,
        a_value,
        n: instance.n(),
        d: instance.d(),
        p1,
        p2,
        exponents_minimal: true,
        x_exceeds_c_squared: c2,
        x_exceeds_b_plus_one_pow_p1: b1,
        preconditions_met: c2 && b1,
        gap_holds: lower >= threshold,
        abs_e_lower_certified: lower,
        abs_e_upper_certified: e.abs_upper(),
        threshold,
        half_log_x_holds,
        precision_bits: e.precision(),
    }
}

/// JSON form of a [`log_sum_order`] query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogOrderJson {
    #[serde(with = "serde_str::rat_vec")]
    pub c: Vec<BigRational>,
    pub f: Vec<Polynomial>,
    #[serde(default)]
    pub precision: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c)
    }

    fn instance(x: BigInt, terms: &[(i64, &[i64])]) -> LogSumInstance {
        LogSumInstance { x, terms: terms.iter().map(|&(c, b)| LogTerm { c: c.into(), b: ints(b) }).collect() }
    }

    #[test]
    fn log_sum_order_examples() {
        let r = log_sum_order(&[rat(1), rat(-1)], &[poly(&[1, 2, 1]), poly(&[1, 2])], 16).unwrap();
        assert_eq!(r.report.order, OrderResult::Known(2));
        assert_eq!(r.report.bound, 4);
        assert!(r.report.holds() && r.routes_agree);
        assert_eq!(r.series_route, Some(OrderResult::Known(2)));

        let r = log_sum_order(&[rat(1)], &[poly(&[1, 1])], 8).unwrap();
        assert_eq!(r.report.order, OrderResult::Known(1));
        assert_eq!(r.report.bound, 1);

        let r = log_sum_order(&[rat(2), rat(-2)], &[poly(&[1, 1]), poly(&[1, 1])], 8).unwrap();
        assert_eq!(r.report.status, BoundStatus::ZeroSum);
    }

    #[test]
    fn log_sum_order_nonunit_constants() {
        // log(2 + 2x) - log(2) - log(1 + x) is zero; constants cancel.
        let r = log_sum_order(&[rat(1), rat(-1), rat(-1)], &[poly(&[2, 2]), poly(&[2]), poly(&[1, 1])], 8).unwrap();
        assert_eq!(r.report.status, BoundStatus::ZeroSum);
        // log(2 + x) has nonzero constant term.
        let r = log_sum_order(&[rat(1)], &[poly(&[2, 1])], 8).unwrap();
        assert_eq!(r.report.order, OrderResult::Known(0));
        assert_eq!(r.series_route, None);
        // (1/2) log 4 - log 2 + log(1 + x^3): constants cancel, order 3.
        let r = log_sum_order(&[q(1, 2), rat(-1), rat(1)], &[poly(&[4]), poly(&[2]), poly(&[1, 0, 0, 1])], 8).unwrap();
        assert_eq!(r.report.order, OrderResult::Known(3));
        assert!(r.routes_agree);
        assert!(log_sum_order(&[rat(1)], &[poly(&[-1, 1])], 8).is_err());
        assert!(log_sum_order(&[rat(1)], &[], 8).is_err());
    }

    #[test]
    fn gap_exponent_examples() {
        assert_eq!(gap_exponents(2, 2).unwrap(), (111, 11));
        assert_eq!(gap_exponents(1, 2).unwrap(), (28, 5));
        assert!(matches!(gap_exponents(1, 1), Err(Error::Degenerate(_))));
        for n in 1..5u64 {
            for d in 2..5u64 {
                let (a, b) = gap_exponents(n, d).unwrap();
                let (a2, b2) = gap_exponents(n + 1, d).unwrap();
                let (a3, b3) = gap_exponents(n, d + 1).unwrap();
                assert!(a <= a2 && b <= b2 && a <= a3 && b <= b3);
                let dn = (n * d) as f64;
                assert_eq!(a, (20.0 * dn * dn.ln()).ceil() as u64);
                assert_eq!(b, (1.0 + dn * (dn.ln() + 1.0)).ceil() as u64);
            }
        }
    }

    #[test]
    fn hij_examples() {
        assert_eq!(coeff_hij(&ints(&[1]), 1).unwrap(), (rat(1), rat(1)));
        assert_eq!(coeff_hij(&ints(&[1]), 2).unwrap(), (q(-1, 2), q(-1, 2)));
        assert_eq!(coeff_hij(&ints(&[1, 1]), 2).unwrap().0, q(1, 2));
        assert_eq!(coeff_hij(&ints(&[1, 1]), 2).unwrap().1, q(1, 2));
        for b in [vec![3, -2, 5], vec![0, 0, 1], vec![-4, 7]] {
            for j in 1..=10 {
                let (s, m) = coeff_hij(&ints(&b), j).unwrap();
                assert_eq!(s, m, "b {b:?} j {j}");
            }
        }
        assert!(coeff_hij(&ints(&[1]), 0).is_err());
    }

    #[test]
    fn sj_examples() {
        let inst = instance(BigInt::from(3), &[(1, &[1]), (-1, &[2])]);
        let r = sj_bounds_check(&inst, 6).unwrap();
        assert_eq!(r.ell, Some(1));
        assert_eq!(r.coefficients[0], rat(-1));
        assert_eq!(r.coefficients[1], q(3, 2));
        assert!(r.upper_bound_failures.is_empty());
        assert!(r.integrality_holds && r.lower_bound_holds && r.ell_within_bound);
        assert!(!r.preconditions_met);
        assert!(r.goal_checks.is_empty());

        let big = instance(BigInt::from(3u32).pow(111u32) + 1u32, &[(1, &[1]), (-1, &[2])]);
        let r = sj_bounds_check(&big, 8).unwrap();
        assert!(r.preconditions_met);
        assert_eq!(r.goal_checks.len(), 7);
        assert!(r.all_hold());

        let nonzero_a = instance(BigInt::from(3), &[(1, &[1]), (1, &[2])]);
        assert_eq!(sj_bounds_check(&nonzero_a, 4).unwrap_err(), Error::WrongBranch);
    }

    #[test]
    fn gap_verify_examples() {
        let x: BigInt = BigInt::from(3u32).pow(111u32) + 1u32;
        let r = gap_verify(&instance(x.clone(), &[(1, &[1]), (-1, &[2])]), 512).unwrap();
        assert_eq!(r.branch, Branch::AZero);
        assert_eq!((r.p1, r.p2, r.d, r.n), (111, 11, 2, 2));
        assert!(r.preconditions_met && r.gap_holds);
        assert!(r.abs_e_lower_certified <= BigRational::new(BigInt::one(), x.clone()));
        assert!(r.abs_e_lower_certified > BigRational::new(BigInt::one(), &x + 3));

        let r = gap_verify(&instance(x.clone(), &[(1, &[1]), (1, &[2])]), 512).unwrap();
        assert_eq!(r.branch, Branch::ANonzero);
        assert_eq!(r.half_log_x_holds, Some(true));
        assert!(r.gap_holds);

        assert_eq!(gap_verify(&instance(x, &[(1, &[1]), (-1, &[1])]), 512).unwrap_err(), Error::Unresolved);
    }

    #[test]
    fn gap_verify_flags_failed_preconditions() {
        let r = gap_verify(&instance(BigInt::from(10), &[(1, &[1]), (-1, &[2])]), 64).unwrap();
        assert!(!r.preconditions_met);
        assert!(r.x_exceeds_c_squared && !r.x_exceeds_b_plus_one_pow_p1);
        // E = log(11/12) is far above 10^-11.
        assert!(r.gap_holds);
    }

    #[test]
    fn instance_json_round_trip() {
        let json = r#"{"x":"1000","terms":[{"c":"1","b":["1"]},{"c":"-1","b":["2","0"]}]}"#;
        let inst: LogSumInstance = serde_json::from_str(json).unwrap();
        assert_eq!(inst.a(1), BigInt::from(1_002_000));
        assert_eq!(inst.d(), 3);
        assert_eq!(inst.big_a(), BigInt::from(-1));
        assert_eq!(serde_json::to_string(&inst).unwrap(), json);
    }
}
