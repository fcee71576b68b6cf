//! Zero testing for signed sums of square roots `sum_i s_i sqrt(a_i)`.
//!
//! Terms are grouped into classes whose square roots are rational
//! multiples of each other (pairwise products are perfect squares); the
//! sum vanishes exactly when every class sum vanishes, and each class sum
//! is decided with exact integer arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numerics::{binomial, int_isqrt, serde_str, RngHandle};
use crate::slp::{parse_slp, Slp};
use crate::sqtest::{perfect_square_slp, SquareTestConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsrInstance {
    pub programs: Vec<Slp>,
    pub signs: Vec<i8>,
}

fn check_signs(signs: &[i8], len: usize) -> Result<()> {
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    if signs.len() != len {
        return Err(Error::LengthMismatch { left: len, right: signs.len() });
    }
    if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::InvalidInstance(format!("sign {s} is not +1 or -1")));
    }
    Ok(())
}

impl SsrInstance {
    pub fn new(programs: Vec<Slp>, signs: Vec<i8>) -> Result<Self> {
        check_signs(&signs, programs.len())?;
        Ok(SsrInstance { programs, signs })
    }

    /// Binary-expansion programs for explicit values.
    pub fn from_values(values: &[BigInt], signs: Vec<i8>) -> Result<Self> {
        Self::new(values.iter().map(Slp::for_integer).collect(), signs)
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }
}

/// Classes as 0-based index lists; `representatives[c]` is the first
/// index inserted into class `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneDimPartition {
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl OneDimPartition {
    pub fn dimension(&self) -> usize {
        self.classes.len()
    }

    /// Greedy grouping driven by a dependence predicate `dep(i, rep)`.
    fn build(n: usize, mut dep: impl FnMut(usize, usize) -> Result<bool>) -> Result<Self> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut representatives = Vec::new();
        for i in 0..n {
            let mut placed = false;
            for (c, &rep) in representatives.iter().enumerate() {
                if dep(i, rep)? {
                    classes[c].push(i);
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![i]);
                representatives.push(i);
            }
        }
        Ok(OneDimPartition { classes, representatives })
    }
}

/// Outcome of one randomized dependence test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTest {
    pub index: usize,
    pub representative: usize,
    pub dependent: bool,
    /// Prime-bound exponent used for the product program.
    pub q: u32,
    /// Prime certifying that the product is not a square.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Whether `sqrt(a) / sqrt(b)` is (probably) rational: runs the square
/// test on the product program.
pub fn pair_dependent(a: &Slp, b: &Slp, cfg: &SquareTestConfig, rng: &mut RngHandle) -> Result<(bool, Option<BigInt>)> {
    let report = perfect_square_slp(&Slp::product(a, b), cfg, rng)?;
    let witness = report.verdict.witness().cloned();
    Ok((witness.is_none(), witness))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub partition: OneDimPartition,
    pub tests: Vec<PairTest>,
}

pub fn partition_one_dim(instance: &SsrInstance, cfg: &SquareTestConfig, rng: &mut RngHandle) -> Result<PartitionReport> {
    let mut tests = Vec::new();
    let partition = OneDimPartition::build(instance.len(), |i, rep| {
        let (a, b) = (&instance.programs[i], &instance.programs[rep]);
        let (dependent, witness) = pair_dependent(a, b, cfg, rng)?;
        let q = cfg.exponent_for(a.size() + b.size() + 1);
        tests.push(PairTest { index: i, representative: rep, dependent, q, witness: witness.map(|p| p.to_string()) });
        Ok(dependent)
    })?;
    Ok(PartitionReport { partition, tests })
}

/// Exact partition for explicit values: products tested with `isqrt`.
pub fn partition_exact(values: &[BigInt]) -> Result<OneDimPartition> {
    OneDimPartition::build(values.len(), |i, rep| Ok(int_isqrt(&(&values[i] * &values[rep]))?.1))
}

/// The integer `sum_i s_i isqrt(a_i a_1)`, which is `sqrt(a_1)` times the
/// class sum; zero exactly when the class sum is zero.
pub fn one_dim_sum(values: &[BigInt], signs: &[i8], bit_limit: u64) -> Result<BigInt> {
    check_signs(signs, values.len())?;
    let first = &values[0];
    let mut acc = BigInt::zero();
    for (i, (a, &s)) in values.iter().zip(signs).enumerate() {
        if !a.is_positive() {
            return Err(Error::InvalidInstance(format!("value {a} is not positive")));
        }
        if a.bits() + first.bits() > bit_limit {
            return Err(Error::BitLimitExceeded { instruction: i + 1, limit: bit_limit });
        }
        let (root, exact) = int_isqrt(&(a * first))?;
        if !exact {
            return Err(Error::InvalidInstance(format!("terms 1 and {} are not in one class", i + 1)));
        }
        acc += root * s;
    }
    Ok(acc)
}

pub fn one_dim_zero(values: &[BigInt], signs: &[i8], bit_limit: u64) -> Result<bool> {
    Ok(one_dim_sum(values, signs, bit_limit)?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsrDecision {
    pub is_zero: bool,
    pub partition: OneDimPartition,
    /// Per class: `sum s_i isqrt(a_i a_rep)` over the class.
    #[serde(with = "serde_str::int_vec")]
    pub class_sums: Vec<BigInt>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tests: Vec<PairTest>,
}

fn decide_classes(values: &[BigInt], signs: &[i8], partition: OneDimPartition, bit_limit: u64) -> Result<SsrDecision> {
    let class_sums = partition
        .classes
        .iter()
        .map(|class| {
            let vals: Vec<BigInt> = class.iter().map(|&i| values[i].clone()).collect();
            let sgns: Vec<i8> = class.iter().map(|&i| signs[i]).collect();
            one_dim_sum(&vals, &sgns, bit_limit)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SsrDecision {
        is_zero: class_sums.iter().all(Zero::is_zero),
        partition,
        class_sums,
        tests: Vec::new(),
    })
}

/// Randomized partition followed by exact per-class zero tests.
pub fn decide_ssr_slp(
    instance: &SsrInstance,
    cfg: &SquareTestConfig,
    rng: &mut RngHandle,
    bit_limit: u64,
) -> Result<SsrDecision> {
    let report = partition_one_dim(instance, cfg, rng)?;
    let values = instance
        .programs
        .iter()
        .map(|p| p.eval_exact(bit_limit))
        .collect::<Result<Vec<_>>>()?;
    let mut decision = decide_classes(&values, &instance.signs, report.partition, bit_limit)?;
    decision.tests = report.tests;
    Ok(decision)
}

/// Deterministic decision for explicit values.
pub fn decide_ssr_eq(values: &[BigInt], signs: &[i8]) -> Result<SsrDecision> {
    check_signs(signs, values.len())?;
    if let Some(a) = values.iter().find(|a| !a.is_positive()) {
        return Err(Error::InvalidInstance(format!("value {a} is not positive")));
    }
    let partition = partition_exact(values)?;
    decide_classes(values, signs, partition, u64::MAX)
}

/// Certified enclosure of `sum s_i sqrt(a_i)`.
pub fn certified_sum(values: &[BigInt], signs: &[i8], prec: u32) -> Result<Interval> {
    check_signs(signs, values.len())?;
    let mut acc = Interval::zero(prec);
    for (a, &s) in values.iter().zip(signs) {
        let root = Interval::sqrt_int(a, prec)?;
        acc = if s > 0 { acc.add(&root) } else { acc.sub(&root) };
    }
    Ok(acc)
}

/// `sum_{i=0}^m (-1)^i C(m,i) sqrt(n0 + i)`, with multiplicities
/// expanded into repeated unit-sign terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialInstance {
    pub m: u32,
    pub n0: BigInt,
    pub values: Vec<BigInt>,
    pub signs: Vec<i8>,
    pub value: Interval,
}

pub fn binomial_instance(m: u32, n0: &BigInt, prec: u32) -> Result<BinomialInstance> {
    if m == 0 {
        return Err(Error::InvalidInstance("m must be at least 1".into()));
    }
    if !n0.is_positive() {
        return Err(Error::InvalidInstance("n0 must be at least 1".into()));
    }
    let mut values = Vec::new();
    let mut signs = Vec::new();
    let mut value = Interval::zero(prec);
    for i in 0..=m {
        let a = n0 + i;
        let mult = binomial(m as u64, i as u64);
        let sign: i8 = if i % 2 == 0 { 1 } else { -1 };
        let count: usize = (&mult).try_into().map_err(|_| Error::InvalidInstance("m too large".into()))?;
        values.extend(std::iter::repeat_n(a.clone(), count));
        signs.extend(std::iter::repeat_n(sign, count));
        let term = Interval::sqrt_int(&a, prec)?.scale_int(&(mult * sign));
        value = value.add(&term);
    }
    Ok(BinomialInstance { m, n0: n0.clone(), values, signs, value })
}

/// One term of the instance file: an explicit value, inline program text
/// or a program path (resolved by the caller).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsrTermJson {
    pub sign: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slp_path: Option<String>,
}

/// Decimal, or binary with a `0b` prefix.
fn parse_value(text: &str) -> Result<BigInt> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0b") {
        Some(bits) => BigInt::parse_bytes(bits.as_bytes(), 2),
        None => t.parse::<BigInt>().ok(),
    };
    parsed.ok_or_else(|| Error::InvalidInstance(format!("bad integer {text:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsrInstanceJson {
    pub terms: Vec<SsrTermJson>,
}

impl SsrInstanceJson {
    /// Explicit values, when every term gives one.
    pub fn values(&self) -> Result<Option<Vec<BigInt>>> {
        if self.terms.iter().any(|t| t.value.is_none()) {
            return Ok(None);
        }
        self.terms
            .iter()
            .map(|t| {
                parse_value(t.value.as_deref().unwrap_or_default())
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn signs(&self) -> Vec<i8> {
        self.terms.iter().map(|t| t.sign).collect()
    }

    /// Builds programs; `load` reads the text behind an `slp_path`.
    pub fn to_instance(&self, mut load: impl FnMut(&str) -> Result<String>) -> Result<SsrInstance> {
        let programs = self
            .terms
            .iter()
            .map(|t| match (&t.value, &t.slp, &t.slp_path) {
                (Some(v), None, None) => parse_value(v).map(|v| Slp::for_integer(&v)),
                (None, Some(text), None) => parse_slp(text),
                (None, None, Some(path)) => parse_slp(&load(path)?),
                _ => Err(Error::InvalidInstance("each term needs exactly one of value, slp, slp_path".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        SsrInstance::new(programs, self.signs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn instance(v: &[i64], s: &[i8]) -> SsrInstance {
        SsrInstance::from_values(&ints(v), s.to_vec()).unwrap()
    }

    fn cfg() -> SquareTestConfig {
        SquareTestConfig { rounds: 32, ..Default::default() }
    }

    #[test]
    fn pair_dependent_examples() {
        let mut rng = RngHandle::new(1);
        let p = |v: i64| Slp::for_integer(&BigInt::from(v));
        assert!(pair_dependent(&p(2), &p(8), &cfg(), &mut rng).unwrap().0);
        let (dep, witness) = pair_dependent(&p(2), &p(3), &cfg(), &mut rng).unwrap();
        assert!(!dep);
        assert!(witness.is_some());
        assert!(pair_dependent(&p(5), &p(5), &cfg(), &mut rng).unwrap().0);
    }

    #[test]
    fn partition_examples() {
        let mut rng = RngHandle::new(2);
        let r = partition_one_dim(&instance(&[2, 8, 3, 27], &[1; 4]), &cfg(), &mut rng).unwrap();
        assert_eq!(r.partition.classes, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(r.partition.representatives, vec![0, 2]);
        let r = partition_one_dim(&instance(&[7], &[1]), &cfg(), &mut rng).unwrap();
        assert_eq!(r.partition.classes, vec![vec![0]]);
        let r = partition_one_dim(&instance(&[2, 3, 6], &[1; 3]), &cfg(), &mut rng).unwrap();
        assert_eq!(r.partition.dimension(), 3);
        assert_eq!(partition_exact(&ints(&[2, 8, 3, 27])).unwrap().classes, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn one_dim_examples() {
        assert!(one_dim_zero(&ints(&[2, 8, 18]), &[1, 1, -1], 1 << 20).unwrap());
        assert!(!one_dim_zero(&ints(&[2, 8]), &[1, 1], 1 << 20).unwrap());
        assert!(!one_dim_zero(&ints(&[4]), &[1], 1 << 20).unwrap());
        assert_eq!(one_dim_sum(&ints(&[2, 8]), &[1, 1], 64).unwrap(), BigInt::from(6));
        assert!(matches!(one_dim_zero(&ints(&[2, 8]), &[1, 1], 4), Err(Error::BitLimitExceeded { .. })));
        assert!(matches!(one_dim_zero(&ints(&[2, 3]), &[1, 1], 64), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn decide_examples() {
        let mut rng = RngHandle::new(3);
        let d = decide_ssr_slp(&instance(&[2, 8, 3], &[1, 1, -1]), &cfg(), &mut rng, 1 << 20).unwrap();
        assert!(!d.is_zero);
        assert_eq!(d.partition.classes, vec![vec![0, 1], vec![2]]);
        assert!(decide_ssr_slp(&instance(&[2, 8, 18], &[1, 1, -1]), &cfg(), &mut rng, 1 << 20).unwrap().is_zero);
        assert!(decide_ssr_slp(&instance(&[3, 3], &[1, -1]), &cfg(), &mut rng, 1 << 20).unwrap().is_zero);

        assert!(decide_ssr_eq(&ints(&[2, 8, 18]), &[1, 1, -1]).unwrap().is_zero);
        assert!(decide_ssr_eq(&ints(&[1, 4, 9]), &[1, 1, -1]).unwrap().is_zero);
        assert!(!decide_ssr_eq(&ints(&[2, 3]), &[1, -1]).unwrap().is_zero);
        assert!(decide_ssr_eq(&ints(&[0]), &[1]).is_err());
        assert!(decide_ssr_eq(&ints(&[2]), &[2]).is_err());
        assert!(decide_ssr_eq(&ints(&[2, 3]), &[1]).is_err());
    }

    #[test]
    fn decision_matches_interval_sign() {
        for (v, s) in [(vec![2, 3, 5], vec![1, 1, -1]), (vec![12, 3, 27], vec![1, 1, -1]), (vec![50, 2, 18], vec![1, -1, -1])] {
            let d = decide_ssr_eq(&ints(&v), &s).unwrap();
            let iv = certified_sum(&ints(&v), &s, 128).unwrap();
            assert_eq!(d.is_zero, iv.contains_zero(), "{v:?}");
        }
    }

    #[test]
    fn binomial_examples() {
        let b = binomial_instance(1, &BigInt::from(1), 128).unwrap();
        assert_eq!(b.values, ints(&[1, 2]));
        assert_eq!(b.signs, vec![1, -1]);
        assert!((b.value.midpoint_f64() + 0.41421356).abs() < 1e-8);

        let b = binomial_instance(3, &BigInt::from(100), 256).unwrap();
        assert_eq!(b.values.len(), 8);
        assert!(!b.value.contains_zero());
        assert!(b.value.abs_upper() < num_rational::BigRational::new(1.into(), 100_000.into()));
        assert!(!decide_ssr_eq(&b.values, &b.signs).unwrap().is_zero);

        let b = binomial_instance(2, &BigInt::from(49), 128).unwrap();
        let d = decide_ssr_eq(&b.values, &b.signs).unwrap();
        assert!(!d.is_zero);
        assert_eq!(d.partition.dimension(), 3);
    }

    #[test]
    fn instance_json_forms() {
        let json = r#"{"terms":[{"sign":1,"value":"8"},{"sign":-1,"slp":"SLP v1\nADD 0 0"},{"sign":1,"slp_path":"x.slp"}]}"#;
        let parsed: SsrInstanceJson = serde_json::from_str(json).unwrap();
        assert_eq!(parsed.values().unwrap(), None);
        let inst = parsed.to_instance(|_| Ok("SLP v1\nADD 0 0\nADD 1 1".into())).unwrap();
        let vals: Vec<BigInt> = inst.programs.iter().map(|p| p.eval_exact(64).unwrap()).collect();
        assert_eq!(vals, ints(&[8, 2, 4]));
        assert_eq!(inst.signs, vec![1, -1, 1]);
        let both = r#"{"terms":[{"sign":1,"value":"8","slp":"SLP v1"}]}"#;
        let parsed: SsrInstanceJson = serde_json::from_str(both).unwrap();
        assert!(parsed.to_instance(|_| unreachable!()).is_err());
        let binary = r#"{"terms":[{"sign":1,"value":"0b1100"},{"sign":-1,"value":"12"}]}"#;
        let parsed: SsrInstanceJson = serde_json::from_str(binary).unwrap();
        assert_eq!(parsed.values().unwrap(), Some(ints(&[12, 12])));
        let bad = r#"{"terms":[{"sign":1,"value":"0b102"}]}"#;
        assert!(serde_json::from_str::<SsrInstanceJson>(bad).unwrap().values().is_err());
    }
}
