//! Sums `sum c_i g_i y_i` of series defined by first-order linear ODEs
//! with polynomial coefficients, and the special families built from
//! exp, the (hyperbolic) trigonometric functions, rational powers and
//! square roots. Each checker computes the sum's order exactly and
//! compares it with the corresponding upper bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{rational_sqrt, serde_str};
use crate::series::{OrderResult, Polynomial, TruncatedSeries};
use crate::wronskian::{distinct_order_basis, wronskian_order, SeriesFamily};

/// Largest precision any checker escalates to.
pub const PRECISION_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Violated,
    /// The sum vanishes modulo `x^(bound + 1)`; the bound says nothing.
    ZeroSum,
    /// Precision too small to decide.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub order: OrderResult,
    pub bound: usize,
    pub precision: usize,
    pub status: BoundStatus,
}

impl BoundReport {
    /// Classifies an order against `bound`.
    pub fn classify(order: OrderResult, bound: usize, precision: usize) -> Self {
        let status = match order {
            OrderResult::Known(k) if k <= bound => BoundStatus::Holds,
            OrderResult::Known(_) => BoundStatus::Violated,
            OrderResult::AtLeast(p) if p > bound => BoundStatus::ZeroSum,
            OrderResult::AtLeast(_) => BoundStatus::Indeterminate,
        };
        BoundReport { order, bound, precision, status }
    }

    pub fn holds(&self) -> bool {
        self.status == BoundStatus::Holds
    }

    /// Anything except an observed violation.
    pub fn consistent(&self) -> bool {
        self.status != BoundStatus::Violated
    }
}

/// Re-runs `check` with doubled precision while it reports
/// `Indeterminate`, up to [`PRECISION_CAP`].
pub fn escalate<F>(start: usize, mut check: F) -> Result<BoundReport>
where
    F: FnMut(usize) -> Result<BoundReport>,
{
    let mut precision = start.max(1);
    loop {
        let report = check(precision)?;
        if report.status != BoundStatus::Indeterminate || precision >= PRECISION_CAP {
            return Ok(report);
        }
        precision = (precision * 2).min(PRECISION_CAP);
    }
}

/// The series solution of `q y' = p y` with `y(0) = y0`.
///
/// Equating coefficients of `x^k` gives
/// `q_0 (k+1) y_{k+1} = sum_m p_m y_{k-m} - sum_{m>=1} q_m (k-m+1) y_{k-m+1}`.
pub fn ode_series(
    p: &Polynomial,
    q: &Polynomial,
    y0: &BigRational,
    precision: usize,
) -> Result<TruncatedSeries> {
    let q0 = q.constant_term();
    if q0.is_zero() {
        return Err(Error::InvalidInstance("q(0) must be nonzero".into()));
    }
    if precision == 0 {
        return Err(Error::InsufficientPrecision { precision, needed: 1 });
    }
    let pc = p.coeffs();
    let qc = q.coeffs();
    let mut y: Vec<BigRational> = Vec::with_capacity(precision);
    y.push(y0.clone());
    for k in 0..precision - 1 {
        let mut acc = BigRational::zero();
        for (m, pm) in pc.iter().enumerate().take(k + 1) {
            if !pm.is_zero() {
                acc += pm * &y[k - m];
            }
        }
        for (m, qm) in qc.iter().enumerate().skip(1).take(k) {
            if !qm.is_zero() {
                let idx = k + 1 - m;
                acc -= qm * &y[idx] * BigRational::from_integer(BigInt::from(idx));
            }
        }
        y.push(acc / (&q0 * BigRational::from_integer(BigInt::from(k + 1))));
    }
    Ok(TruncatedSeries::from_coeffs(y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeTerm {
    #[serde(with = "serde_str::rat")]
    pub c: BigRational,
    pub g: Polynomial,
    pub p: Polynomial,
    pub q: Polynomial,
    #[serde(with = "serde_str::rat")]
    pub y0: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeSumInstance {
    pub d: usize,
    pub terms: Vec<OdeTerm>,
}

impl OdeSumInstance {
    pub fn n(&self) -> usize {
        self.terms.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, t) in self.terms.iter().enumerate() {
            if [&t.g, &t.p, &t.q].iter().any(|poly| poly.degree() > self.d) {
                return Err(Error::InvalidInstance(format!("term {i}: degree exceeds d = {}", self.d)));
            }
            if t.q.constant_term().is_zero() {
                return Err(Error::InvalidInstance(format!("term {i}: q(0) = 0")));
            }
            if t.y0.is_zero() {
                return Err(Error::InvalidInstance(format!("term {i}: y(0) = 0")));
            }
        }
        Ok(())
    }

    pub fn solutions(&self, precision: usize) -> Result<Vec<TruncatedSeries>> {
        self.terms
            .iter()
            .map(|t| ode_series(&t.p, &t.q, &t.y0, precision))
            .collect()
    }

    fn sum_of_orders(solutions: &[TruncatedSeries]) -> Result<usize> {
        solutions
            .iter()
            .map(|y| y.order().known().ok_or(Error::Indeterminate))
            .sum()
    }

    /// `sum ord(y_i) + n^2 d + n - 1`.
    pub fn bound(&self, solutions: &[TruncatedSeries]) -> Result<usize> {
        let n = self.n();
        Ok(Self::sum_of_orders(solutions)? + n * n * self.d + n - 1)
    }

    /// `h_i = g_i y_i`.
    pub fn products(&self, solutions: &[TruncatedSeries], precision: usize) -> Result<Vec<TruncatedSeries>> {
        self.terms
            .iter()
            .zip(solutions)
            .map(|(t, y)| Ok(t.g.to_series(precision)?.mul(y)))
            .collect()
    }
}

pub fn ode_sum_check(instance: &OdeSumInstance, precision: usize) -> Result<BoundReport> {
    instance.validate()?;
    let ys = instance.solutions(precision)?;
    let bound = instance.bound(&ys)?;
    let hs = instance.products(&ys, precision)?;
    let cs: Vec<BigRational> = instance.terms.iter().map(|t| t.c.clone()).collect();
    let s = TruncatedSeries::linear_combine(&cs, &hs)?;
    Ok(BoundReport::classify(s.order(), bound, precision))
}

/// [`ode_sum_check`] at precision `bound + 8`, doubled while indeterminate.
pub fn ode_sum_check_auto(instance: &OdeSumInstance) -> Result<BoundReport> {
    instance.validate()?;
    let n = instance.n();
    let start = n * n * instance.d + n - 1 + 8;
    escalate(start, |p| ode_sum_check(instance, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WronskianBoundStatus {
    Holds,
    Violated,
    /// The products `g_i y_i` are dependent within precision.
    Dependent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WronskianBoundReport {
    pub w_order: OrderResult,
    /// `sum ord(y_i) + n^2 d`.
    pub bound: usize,
    pub precision: usize,
    pub status: WronskianBoundStatus,
}

/// Checks `ord W(g_1 y_1, ..., g_n y_n) <= sum ord(y_i) + n^2 d` for an
/// independent family.
pub fn ode_wronskian_check(instance: &OdeSumInstance) -> Result<WronskianBoundReport> {
    instance.validate()?;
    let n = instance.n();
    let precision = n * n * instance.d + 2 * n + 8;
    let ys = instance.solutions(precision)?;
    let bound = OdeSumInstance::sum_of_orders(&ys)? + n * n * instance.d;
    let family = SeriesFamily::new(instance.products(&ys, precision)?)?;
    let w = wronskian_order(&family)?;
    let status = match distinct_order_basis(&family) {
        Err(Error::RankDeficientWithinPrecision { .. }) => WronskianBoundStatus::Dependent,
        Err(e) => return Err(e),
        Ok(_) => match w {
            OrderResult::Known(k) if k <= bound => WronskianBoundStatus::Holds,
            _ => WronskianBoundStatus::Violated,
        },
    };
    Ok(WronskianBoundReport { w_order: w, bound, precision, status })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtTerm {
    #[serde(with = "serde_str::rat")]
    pub c: BigRational,
    pub g: Polynomial,
    pub f: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtSumInstance {
    pub d: usize,
    pub terms: Vec<SqrtTerm>,
}

impl SqrtSumInstance {
    pub fn n(&self) -> usize {
        self.terms.len()
    }

    /// `d n^2 + n`.
    pub fn bound(&self) -> usize {
        let n = self.n();
        self.d * n * n + n
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.f.degree() > self.d || t.g.degree() > self.d {
                return Err(Error::InvalidInstance(format!("term {i}: degree exceeds d = {}", self.d)));
            }
            let f0 = t.f.constant_term();
            if f0.is_zero() || rational_sqrt(&f0).is_none() {
                return Err(Error::NotSquareConstantTerm);
            }
        }
        Ok(())
    }
}

pub fn sqrt_sum_check(instance: &SqrtSumInstance, precision: usize) -> Result<BoundReport> {
    instance.validate()?;
    let mut parts = Vec::with_capacity(instance.n());
    for t in &instance.terms {
        let root = t.f.to_series(precision)?.sqrt()?;
        parts.push(t.g.to_series(precision)?.mul(&root));
    }
    let cs: Vec<BigRational> = instance.terms.iter().map(|t| t.c.clone()).collect();
    let s = TruncatedSeries::linear_combine(&cs, &parts)?;
    Ok(BoundReport::classify(s.order(), instance.bound(), precision))
}

pub fn sqrt_sum_check_auto(instance: &SqrtSumInstance) -> Result<BoundReport> {
    instance.validate()?;
    escalate(instance.bound() + 8, |p| sqrt_sum_check(instance, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigFunction {
    Cosh,
    Sinh,
    Cos,
    Sin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecialTerm {
    /// `c g exp(f)` with `f(0) = 0`.
    Exp {
        #[serde(with = "serde_str::rat")]
        c: BigRational,
        g: Polynomial,
        f: Polynomial,
    },
    /// `c g phi(f)` with `f(0) = 0`.
    Trig {
        #[serde(with = "serde_str::rat")]
        c: BigRational,
        g: Polynomial,
        f: Polynomial,
        func: TrigFunction,
    },
    /// `c g (p/q)^alpha` with `p(0) = q(0) = 1`.
    RationalPower {
        #[serde(with = "serde_str::rat")]
        c: BigRational,
        g: Polynomial,
        p: Polynomial,
        q: Polynomial,
        #[serde(with = "serde_str::rat")]
        alpha: BigRational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    Exp,
    CoshSinhCosSin,
    RationalPower,
}

impl SpecialTerm {
    fn kind(&self) -> SpecialKind {
        match self {
            SpecialTerm::Exp { .. } => SpecialKind::Exp,
            SpecialTerm::Trig { .. } => SpecialKind::CoshSinhCosSin,
            SpecialTerm::RationalPower { .. } => SpecialKind::RationalPower,
        }
    }

    fn c(&self) -> &BigRational {
        match self {
            SpecialTerm::Exp { c, .. } | SpecialTerm::Trig { c, .. } | SpecialTerm::RationalPower { c, .. } => c,
        }
    }

    fn g(&self) -> &Polynomial {
        match self {
            SpecialTerm::Exp { g, .. } | SpecialTerm::Trig { g, .. } | SpecialTerm::RationalPower { g, .. } => g,
        }
    }

    fn series(&self, precision: usize) -> Result<TruncatedSeries> {
        match self {
            SpecialTerm::Exp { f, .. } => f.to_series(precision)?.exp(),
            SpecialTerm::Trig { f, func, .. } => {
                let arg = f.to_series(precision)?;
                Ok(match func {
                    TrigFunction::Sin => arg.sin_cos()?.0,
                    TrigFunction::Cos => arg.sin_cos()?.1,
                    TrigFunction::Sinh => arg.sinh_cosh()?.0,
                    TrigFunction::Cosh => arg.sinh_cosh()?.1,
                })
            }
            SpecialTerm::RationalPower { p, q, alpha, .. } => {
                let ratio = p.to_series(precision)?.div(&q.to_series(precision)?)?;
                ratio.pow_rat(alpha)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFamilyInstance {
    pub kind: SpecialKind,
    pub d: usize,
    pub terms: Vec<SpecialTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialFamilyReport {
    pub kind: SpecialKind,
    #[serde(flatten)]
    pub report: BoundReport,
    /// The bound with `d` read as a common degree bound for all polynomials.
    pub stated_bound: usize,
    pub stated_bound_holds: bool,
}

impl SpecialFamilyInstance {
    pub fn n(&self) -> usize {
        self.terms.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::EmptyInput);
        }
        if self.kind != SpecialKind::RationalPower && self.d == 0 {
            return Err(Error::InvalidInstance("d must be at least 1".into()));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.kind() != self.kind {
                return Err(Error::InvalidInstance(format!("term {i}: kind mismatch")));
            }
            if t.g().degree() > self.d {
                return Err(Error::InvalidInstance(format!("term {i}: deg g exceeds d")));
            }
            match t {
                SpecialTerm::Exp { f, .. } | SpecialTerm::Trig { f, .. } => {
                    if f.degree() > self.d {
                        return Err(Error::InvalidInstance(format!("term {i}: deg f exceeds d")));
                    }
                    if !f.constant_term().is_zero() {
                        return Err(Error::NonzeroConstantTerm);
                    }
                }
                SpecialTerm::RationalPower { p, q, .. } => {
                    if p.degree() > self.d || q.degree() > self.d {
                        return Err(Error::InvalidInstance(format!("term {i}: deg p/q exceeds d")));
                    }
                    let one = BigRational::from_integer(BigInt::from(1));
                    if p.constant_term() != one || q.constant_term() != one {
                        return Err(Error::NonUnitConstantTerm);
                    }
                }
            }
        }
        Ok(())
    }

    fn max_g_degree(&self) -> usize {
        self.terms.iter().map(|t| t.g().degree()).max().unwrap_or(0)
    }

    /// The closed-form bounds with `d` read as a common degree bound:
    /// `n^2(d-1)+n-1`, `4n^2(d-1)+2n-1` and `2n^2 d+n-1`.
    pub fn stated_bound(&self) -> usize {
        let n = self.n();
        let d = self.d;
        match self.kind {
            SpecialKind::Exp => n * n * d.saturating_sub(1) + n - 1,
            SpecialKind::CoshSinhCosSin => 4 * n * n * d.saturating_sub(1) + 2 * n - 1,
            SpecialKind::RationalPower => 2 * n * n * d + n - 1,
        }
    }

    /// The first-order-ODE bound applied to the rewritten family. For exp
    /// and the trigonometric cases the equation is `y' = ±f' y`, whose
    /// coefficients have degree `d - 1`, while the multipliers `g_i` may
    /// have degree up to `d`; the effective degree is the larger of the two.
    pub fn bound(&self) -> usize {
        let n = self.n();
        match self.kind {
            SpecialKind::Exp => {
                let e = self.d.saturating_sub(1).max(self.max_g_degree());
                n * n * e + n - 1
            }
            SpecialKind::CoshSinhCosSin => {
                let e = self.d.saturating_sub(1).max(self.max_g_degree());
                4 * n * n * e + 2 * n - 1
            }
            SpecialKind::RationalPower => {
                let e = (2 * self.d).max(self.max_g_degree());
                n * n * e + n - 1
            }
        }
    }
}

pub fn special_family_check(
    instance: &SpecialFamilyInstance,
    precision: usize,
) -> Result<SpecialFamilyReport> {
    instance.validate()?;
    let mut parts = Vec::with_capacity(instance.n());
    for t in &instance.terms {
        parts.push(t.g().to_series(precision)?.mul(&t.series(precision)?));
    }
    let cs: Vec<BigRational> = instance.terms.iter().map(|t| t.c().clone()).collect();
    let s = TruncatedSeries::linear_combine(&cs, &parts)?;
    let report = BoundReport::classify(s.order(), instance.bound(), precision);
    let stated_bound = instance.stated_bound();
    let stated_bound_holds = match report.order {
        OrderResult::Known(k) => k <= stated_bound,
        OrderResult::AtLeast(_) => true,
    };
    Ok(SpecialFamilyReport { kind: instance.kind, report, stated_bound, stated_bound_holds })
}

pub fn special_family_check_auto(instance: &SpecialFamilyInstance) -> Result<SpecialFamilyReport> {
    instance.validate()?;
    let mut precision = instance.bound() + 8;
    loop {
        let r = special_family_check(instance, precision)?;
        if r.report.status != BoundStatus::Indeterminate || precision >= PRECISION_CAP {
            return Ok(r);
        }
        precision = (precision * 2).min(PRECISION_CAP);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c)
    }

    fn ode_term(c: i64, g: &[i64], p: &[i64], qq: &[i64]) -> OdeTerm {
        OdeTerm { c: rat(c), g: poly(g), p: poly(p), q: poly(qq), y0: rat(1) }
    }

    #[test]
    fn ode_series_examples() {
        let e = ode_series(&poly(&[1]), &poly(&[1]), &rat(1), 5).unwrap();
        let expected: Vec<BigRational> = vec![q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)];
        assert_eq!(e.coeffs(), &expected[..]);
        let y = ode_series(&poly(&[1]), &poly(&[1, 1]), &rat(1), 5).unwrap();
        assert_eq!(y, TruncatedSeries::from_i64s(&[1, 1], 5).unwrap());
        let c = ode_series(&poly(&[]), &poly(&[1]), &rat(3), 4).unwrap();
        assert_eq!(c, TruncatedSeries::from_i64s(&[3], 4).unwrap());
        assert!(ode_series(&poly(&[1]), &poly(&[0, 1]), &rat(1), 4).is_err());
    }

    #[test]
    fn ode_residual_vanishes() {
        let p = poly(&[2, -1, 3]);
        let qq = poly(&[1, 4, 0, -2]);
        let y = ode_series(&p, &qq, &q(3, 5), 20).unwrap();
        let lhs = qq.to_series(19).unwrap().mul(&y.derivative().unwrap());
        let rhs = p.to_series(20).unwrap().mul(&y).truncate(19);
        assert!(lhs.sub(&rhs).is_zero_within_precision());
    }

    #[test]
    fn ode_sum_examples() {
        let inst = OdeSumInstance { d: 2, terms: vec![ode_term(1, &[0, 0, 1], &[1], &[1])] };
        let r = ode_sum_check(&inst, 12).unwrap();
        assert_eq!(r.order, OrderResult::Known(2));
        assert_eq!(r.bound, 2);
        assert!(r.holds());

        let t = ode_term(1, &[1], &[1], &[1]);
        let mut t2 = t.clone();
        t2.c = rat(-1);
        let inst = OdeSumInstance { d: 1, terms: vec![t, t2] };
        assert_eq!(ode_sum_check_auto(&inst).unwrap().status, BoundStatus::ZeroSum);

        let inst = OdeSumInstance {
            d: 1,
            terms: vec![ode_term(1, &[1], &[1], &[1]), ode_term(-1, &[1], &[-1], &[1])],
        };
        let r = ode_sum_check_auto(&inst).unwrap();
        assert_eq!(r.order, OrderResult::Known(1));
        assert_eq!(r.bound, 5);
        assert!(r.holds());
    }

    #[test]
    fn ode_sum_low_precision_is_indeterminate() {
        let t = ode_term(1, &[1], &[1], &[1]);
        let mut t2 = t.clone();
        t2.c = rat(-1);
        let inst = OdeSumInstance { d: 1, terms: vec![t, t2] };
        assert_eq!(ode_sum_check(&inst, 3).unwrap().status, BoundStatus::Indeterminate);
    }

    #[test]
    fn ode_instance_validation() {
        let mut t = ode_term(1, &[1], &[1], &[0, 1]);
        let inst = OdeSumInstance { d: 1, terms: vec![t.clone()] };
        assert!(inst.validate().is_err());
        t.q = poly(&[1]);
        t.y0 = rat(0);
        assert!(OdeSumInstance { d: 1, terms: vec![t.clone()] }.validate().is_err());
        t.y0 = rat(1);
        t.g = poly(&[1, 1, 1]);
        assert!(OdeSumInstance { d: 1, terms: vec![t] }.validate().is_err());
        assert_eq!(OdeSumInstance { d: 1, terms: vec![] }.validate(), Err(Error::EmptyInput));
    }

    #[test]
    fn wronskian_route_bound() {
        let inst = OdeSumInstance {
            d: 1,
            terms: vec![ode_term(1, &[1], &[1], &[1]), ode_term(-1, &[1, 1], &[-1], &[1, 1])],
        };
        let r = ode_wronskian_check(&inst).unwrap();
        assert_eq!(r.status, WronskianBoundStatus::Holds);
        assert!(r.w_order.known().unwrap() <= 4);
    }

    #[test]
    fn sqrt_sum_examples() {
        let inst = SqrtSumInstance {
            d: 2,
            terms: vec![
                SqrtTerm { c: rat(1), g: poly(&[1]), f: poly(&[1, 2, 1]) },
                SqrtTerm { c: rat(-1), g: poly(&[1]), f: poly(&[1, 2]) },
            ],
        };
        let r = sqrt_sum_check_auto(&inst).unwrap();
        assert_eq!((r.order, r.bound), (OrderResult::Known(2), 10));
        assert!(r.holds());

        let inst = SqrtSumInstance {
            d: 1,
            terms: vec![
                SqrtTerm { c: rat(1), g: poly(&[1]), f: poly(&[1, 1]) },
                SqrtTerm { c: rat(-1), g: poly(&[1]), f: poly(&[1, 1]) },
            ],
        };
        assert_eq!(sqrt_sum_check_auto(&inst).unwrap().status, BoundStatus::ZeroSum);

        let inst = SqrtSumInstance {
            d: 1,
            terms: vec![SqrtTerm { c: rat(1), g: poly(&[0, 1]), f: poly(&[1, 1]) }],
        };
        let r = sqrt_sum_check_auto(&inst).unwrap();
        assert_eq!((r.order, r.bound), (OrderResult::Known(1), 2));

        let bad = SqrtSumInstance {
            d: 1,
            terms: vec![SqrtTerm { c: rat(1), g: poly(&[1]), f: poly(&[2, 1]) }],
        };
        assert_eq!(sqrt_sum_check_auto(&bad), Err(Error::NotSquareConstantTerm));
    }

    fn trig(func: TrigFunction) -> SpecialFamilyInstance {
        SpecialFamilyInstance {
            kind: SpecialKind::CoshSinhCosSin,
            d: 1,
            terms: vec![SpecialTerm::Trig { c: rat(1), g: poly(&[1]), f: poly(&[0, 1]), func }],
        }
    }

    #[test]
    fn special_family_examples() {
        let r = special_family_check_auto(&trig(TrigFunction::Sin)).unwrap();
        assert_eq!((r.report.order, r.report.bound, r.stated_bound), (OrderResult::Known(1), 1, 1));
        assert!(r.report.holds() && r.stated_bound_holds);

        let r = special_family_check_auto(&trig(TrigFunction::Cos)).unwrap();
        assert_eq!(r.report.order, OrderResult::Known(0));
        assert!(r.report.holds());

        let inst = SpecialFamilyInstance {
            kind: SpecialKind::RationalPower,
            d: 1,
            terms: vec![SpecialTerm::RationalPower {
                c: rat(1),
                g: poly(&[1]),
                p: poly(&[1, 1]),
                q: poly(&[1]),
                alpha: q(1, 2),
            }],
        };
        let r = special_family_check_auto(&inst).unwrap();
        assert_eq!((r.report.order, r.report.bound), (OrderResult::Known(0), 2));
    }

    #[test]
    fn exp_probe_with_top_degree_multiplier() {
        // n = 1, g = x^d: the order equals d, one more than n^2(d-1)+n-1.
        for d in 1..=5usize {
            let mut g = vec![0i64; d + 1];
            g[d] = 1;
            let mut f = vec![0i64; d + 1];
            f[d] = 2;
            let inst = SpecialFamilyInstance {
                kind: SpecialKind::Exp,
                d,
                terms: vec![SpecialTerm::Exp { c: rat(1), g: poly(&g), f: poly(&f) }],
            };
            let r = special_family_check_auto(&inst).unwrap();
            assert_eq!(r.report.order, OrderResult::Known(d));
            assert_eq!(r.report.bound, d);
            assert!(r.report.holds());
            assert_eq!(r.stated_bound, d - 1);
            assert!(!r.stated_bound_holds);
        }
    }

    #[test]
    fn cosh_minus_sinh_is_exp_of_negation() {
        let x = TruncatedSeries::from_i64s(&[0, 1], 8).unwrap();
        let (sh, ch) = x.sinh_cosh().unwrap();
        assert_eq!(ch.sub(&sh), x.neg().exp().unwrap());
    }

    #[test]
    fn special_validation() {
        let mut inst = trig(TrigFunction::Sin);
        inst.terms = vec![SpecialTerm::Trig { c: rat(1), g: poly(&[1]), f: poly(&[1, 1]), func: TrigFunction::Sin }];
        assert_eq!(inst.validate(), Err(Error::NonzeroConstantTerm));
        let mut inst = trig(TrigFunction::Sin);
        inst.kind = SpecialKind::Exp;
        assert!(inst.validate().is_err());
    }
}
