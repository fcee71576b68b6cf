//! Randomized perfect-square test for integers given by straight-line
//! programs, via quadratic residues modulo random primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    default_prime_budget, format_rational, is_perfect_square, is_prime, mod_exp, primes_up_to,
    rand_prime_below_with_budget, serde_str, RngHandle,
};
use crate::slp::Slp;

/// Programs whose value fits in this many bits are checked to be positive.
const DESK_BIT_LIMIT: u64 = 4096;
/// Resamples allowed per round when the drawn prime is 2 or divides the value.
const RESAMPLE_LIMIT: u32 = 1000;
const MR_ROUNDS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareTestConfig {
    pub rounds: u32,
    #[serde(with = "serde_str::rat")]
    pub grh_constant: BigRational,
    pub prime_bound_exponent_override: Option<u32>,
}

impl Default for SquareTestConfig {
    fn default() -> Self {
        SquareTestConfig { rounds: 64, grh_constant: BigRational::one(), prime_bound_exponent_override: None }
    }
}

impl SquareTestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidInstance("rounds must be at least 1".into()));
        }
        if !self.grh_constant.is_positive() {
            return Err(Error::InvalidInstance("GRH constant must be positive".into()));
        }
        Ok(())
    }

    /// Prime-bound exponent used for a program of size `t`.
    pub fn exponent_for(&self, t: usize) -> u32 {
        self.prime_bound_exponent_override.unwrap_or_else(|| q_exponent(t, &self.grh_constant))
    }
}

/// Smallest `q` with `2^t + 2 <= 2^(q/2) / (4 C q) - 2q`.
///
/// The comparison is exact: writing `C = n/d` and `R = 4nq(2^t + 2 + 2q)`,
/// the condition is `d 2^(q/2) >= R`, squared when `q` is odd.
pub fn q_exponent(t: usize, grh_constant: &BigRational) -> u32 {
    let n = grh_constant.numer();
    let d = grh_constant.denom();
    let lhs = (BigInt::one() << t) + 2;
    let mut q: u32 = 1;
    loop {
        let r = BigInt::from(4) * n * q * (&lhs + 2 * q);
        let holds = if q.is_multiple_of(2) {
            (d << (q / 2)) >= r
        } else {
            (d * d) << q >= &r * &r
        };
        if holds {
            return q;
        }
        q += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Legendre {
    #[serde(rename = "qr")]
    Qr,
    #[serde(rename = "non_qr")]
    NonQr,
    #[serde(rename = "divides_p")]
    DividesP,
}

/// Euler's criterion for `a` modulo the odd prime `p`.
pub fn legendre_is_square(a: &BigInt, p: &BigInt) -> Result<Legendre> {
    let odd_prime = p.is_odd() && *p > BigInt::from(2) && {
        // Deterministic below 2^64; fixed-seed Miller-Rabin above.
        let mut rng = RngHandle::new(0x5eed);
        is_prime(p, MR_ROUNDS, &mut rng)
    };
    if !odd_prime {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(euler(a, p))
}

fn euler(a: &BigInt, p: &BigInt) -> Legendre {
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Legendre::DividesP;
    }
    let e: BigInt = (p - 1) >> 1;
    let v = mod_exp(&r, &e, p).expect("p >= 3");
    if v.is_one() {
        Legendre::Qr
    } else {
        Legendre::NonQr
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SquareVerdict {
    NotSquare {
        #[serde(with = "serde_str::int")]
        witness: BigInt,
    },
    ProbablySquare {
        #[serde(with = "serde_str::rat")]
        error_bound: BigRational,
    },
}

impl SquareVerdict {
    pub fn is_probably_square(&self) -> bool {
        matches!(self, SquareVerdict::ProbablySquare { .. })
    }

    pub fn witness(&self) -> Option<&BigInt> {
        match self {
            SquareVerdict::NotSquare { witness } => Some(witness),
            SquareVerdict::ProbablySquare { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareTestReport {
    pub verdict: SquareVerdict,
    pub rounds_requested: u32,
    pub rounds_used: u32,
    pub slp_size: usize,
    pub q: u32,
    pub q_overridden: bool,
    #[serde(with = "serde_str::int")]
    pub prime_bound: BigInt,
    #[serde(with = "serde_str::rat")]
    pub grh_constant: BigRational,
    /// Always true: the constant is a free parameter, not derived.
    pub grh_constant_is_assumed: bool,
    pub seed: u64,
}

/// `(3/4)^rounds`.
pub fn error_bound(rounds: u32) -> BigRational {
    BigRational::new(BigInt::from(3).pow(rounds), BigInt::from(4).pow(rounds))
}

/// Runs the randomized square test on the value computed by `slp`.
pub fn perfect_square_slp(slp: &Slp, cfg: &SquareTestConfig, rng: &mut RngHandle) -> Result<SquareTestReport> {
    cfg.validate()?;
    if let Ok(v) = slp.eval_exact(DESK_BIT_LIMIT) {
        if !v.is_positive() {
            return Err(Error::InvalidInstance(format!("program value {v} is not positive")));
        }
    }
    let t = slp.size();
    let q = cfg.exponent_for(t);
    let bound = BigInt::one() << q;
    let budget = default_prime_budget(&bound);
    let seed = rng.seed();
    let two = BigInt::from(2);
    let mut verdict = None;
    let mut rounds_used = 0;
    'rounds: for _ in 0..cfg.rounds {
        rounds_used += 1;
        let mut resamples = 0;
        let p = loop {
            let p = rand_prime_below_with_budget(&bound, rng, budget, MR_ROUNDS)?;
            if p != two && !slp.eval_mod(&p)?.is_zero() {
                break p;
            }
            resamples += 1;
            if resamples >= RESAMPLE_LIMIT {
                return Err(Error::SamplingFailed { attempts: resamples as u64 });
            }
        };
        let residue = slp.eval_mod(&p)?;
        if euler(&residue, &p) == Legendre::NonQr {
            verdict = Some(SquareVerdict::NotSquare { witness: p });
            break 'rounds;
        }
    }
    let verdict = verdict.unwrap_or_else(|| SquareVerdict::ProbablySquare { error_bound: error_bound(cfg.rounds) });
    Ok(SquareTestReport {
        verdict,
        rounds_requested: cfg.rounds,
        rounds_used,
        slp_size: t,
        q,
        q_overridden: cfg.prime_bound_exponent_override.is_some(),
        prime_bound: bound,
        grh_constant: cfg.grh_constant.clone(),
        grh_constant_is_assumed: true,
        seed,
    })
}

/// Checks a non-square certificate: `p` odd prime, `p` does not divide
/// the value, and the value is a non-residue mod `p`.
pub fn check_witness(slp: &Slp, p: &BigInt) -> Result<bool> {
    let residue = slp.eval_mod(p)?;
    Ok(legendre_is_square(&residue, p)? == Legendre::NonQr)
}

/// Fraction of primes `p <= x` with `p` not dividing `4a` and `a` a
/// non-residue mod `p`.
pub fn density_experiment(a: &BigInt, x: u64) -> Result<BigRational> {
    if !a.is_positive() {
        return Err(Error::InvalidInstance("a must be positive".into()));
    }
    if is_perfect_square(a) {
        return Err(Error::PerfectSquare(a.to_string()));
    }
    if x < 2 {
        return Err(Error::BoundTooSmall);
    }
    let primes = primes_up_to(x);
    let hits = primes
        .iter()
        .filter(|&&p| p != 2 && euler(a, &BigInt::from(p)) == Legendre::NonQr)
        .count();
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(primes.len())))
}

/// Decimal rendering of a density for reports.
pub fn density_to_string(d: &BigRational) -> String {
    let approx = d.numer().to_f64().unwrap_or(f64::NAN) / d.denom().to_f64().unwrap_or(f64::NAN);
    format!("{} ({approx:.4})", format_rational(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::int_isqrt;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(int(n), int(d))
    }

    // Floating-point evaluation of the condition, away from the boundary.
    fn q_linear_oracle(t: i32, c: f64) -> u32 {
        (1..)
            .find(|&q| {
                let q = q as f64;
                2f64.powi(t) + 2.0 <= 2f64.powf(q / 2.0) / (4.0 * c * q) - 2.0 * q
            })
            .unwrap()
    }

    #[test]
    fn q_exponent_examples() {
        assert_eq!(q_exponent(3, &BigRational::one()), 26);
        for t in 0..40 {
            assert_eq!(q_exponent(t, &BigRational::one()), q_linear_oracle(t as i32, 1.0), "t = {t}");
            assert!(q_exponent(t + 1, &BigRational::one()) >= q_exponent(t, &BigRational::one()));
        }
        assert_eq!(q_exponent(5, &rat(7, 3)), q_linear_oracle(5, 7.0 / 3.0));
        assert!(q_exponent(3, &rat(1, 2)) <= 26);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_is_square(&int(6), &int(7)).unwrap(), Legendre::NonQr);
        assert_eq!(legendre_is_square(&int(4), &int(5)).unwrap(), Legendre::Qr);
        assert_eq!(legendre_is_square(&int(0), &int(7)).unwrap(), Legendre::DividesP);
        assert_eq!(legendre_is_square(&int(48), &int(7)).unwrap(), Legendre::NonQr);
        assert!(matches!(legendre_is_square(&int(1), &int(2)), Err(Error::NotOddPrime(_))));
        assert!(matches!(legendre_is_square(&int(1), &int(9)), Err(Error::NotOddPrime(_))));
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 0..p {
                let expected = if a == 0 {
                    Legendre::DividesP
                } else if squares.contains(&a) {
                    Legendre::Qr
                } else {
                    Legendre::NonQr
                };
                assert_eq!(legendre_is_square(&int(a as i64), &int(p as i64)).unwrap(), expected);
            }
        }
    }

    #[test]
    fn squares_are_probably_square() {
        let cfg = SquareTestConfig::default();
        for v in [1i64, 49, 144, 1 << 40] {
            let slp = Slp::for_integer(&int(v));
            for seed in 0..5 {
                let report = perfect_square_slp(&slp, &cfg, &mut RngHandle::new(seed)).unwrap();
                assert!(report.verdict.is_probably_square(), "{v}");
                assert_eq!(report.rounds_used, 64);
            }
        }
    }

    #[test]
    fn non_square_gets_certificate() {
        let cfg = SquareTestConfig::default();
        let slp = Slp::for_integer(&int(48));
        for seed in 0..50 {
            let report = perfect_square_slp(&slp, &cfg, &mut RngHandle::new(seed)).unwrap();
            let p = report.verdict.witness().expect("48 is not a square");
            assert!(check_witness(&slp, p).unwrap());
            assert!(!(int(4 * 48) % p).is_zero());
            assert!(!int_isqrt(&int(48)).unwrap().1);
        }
    }

    #[test]
    fn report_is_deterministic_and_records_override() {
        let slp = Slp::for_integer(&int(1_000_003));
        let cfg = SquareTestConfig { prime_bound_exponent_override: Some(20), ..Default::default() };
        let a = perfect_square_slp(&slp, &cfg, &mut RngHandle::new(3)).unwrap();
        let b = perfect_square_slp(&slp, &cfg, &mut RngHandle::new(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.q_overridden);
        assert_eq!(a.q, 20);
        assert_eq!(a.prime_bound, int(1 << 20));
        let json = serde_json::to_string(&a).unwrap();
        let back: SquareTestReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn error_bound_value() {
        assert_eq!(error_bound(2), rat(9, 16));
        match perfect_square_slp(&Slp::default(), &SquareTestConfig { rounds: 3, ..Default::default() }, &mut RngHandle::new(1))
            .unwrap()
            .verdict
        {
            SquareVerdict::ProbablySquare { error_bound } => assert_eq!(error_bound, rat(27, 64)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = SquareTestConfig::default();
        let zero = Slp::for_integer(&int(0));
        assert!(matches!(perfect_square_slp(&zero, &cfg, &mut RngHandle::new(0)), Err(Error::InvalidInstance(_))));
        let no_rounds = SquareTestConfig { rounds: 0, ..Default::default() };
        assert!(perfect_square_slp(&Slp::default(), &no_rounds, &mut RngHandle::new(0)).is_err());
        // Every odd prime below 2^3 divides 105: resampling cannot succeed.
        let tiny = SquareTestConfig { prime_bound_exponent_override: Some(3), ..Default::default() };
        assert!(matches!(
            perfect_square_slp(&Slp::for_integer(&int(105)), &tiny, &mut RngHandle::new(0)),
            Err(Error::SamplingFailed { .. })
        ));
    }

    #[test]
    fn density_examples() {
        let in_range = |d: BigRational, lo: f64, hi: f64| {
            let v = d.numer().to_f64().unwrap() / d.denom().to_f64().unwrap();
            assert!((lo..=hi).contains(&v), "{v}");
        };
        in_range(density_experiment(&int(2), 10_000).unwrap(), 0.45, 0.55);
        in_range(density_experiment(&int(3), 1_000).unwrap(), 0.4, 0.6);
        in_range(density_experiment(&int(48), 10_000).unwrap(), 0.4, 0.6);
        assert!(matches!(density_experiment(&int(49), 100), Err(Error::PerfectSquare(_))));
    }
}
