//! Exact integer and rational arithmetic, primality and the seeded
//! randomness used by every randomized procedure in the crate.

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

/// Deterministic random stream keyed by a 64-bit seed.
///
/// Handles are single-owner. Concurrent tasks should each take their own
/// handle from [`RngHandle::derive`] rather than share one.
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngHandle {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngHandle { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An independent handle for sub-task `index`. Same seed and index
    /// always give the same stream, and it never overlaps the parent's.
    pub fn derive(&self, index: u64) -> RngHandle {
        let stream = self
            .stream
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index.wrapping_add(1));
        RngHandle::with_stream(self.seed, stream)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }

    /// Uniform in `[low, high]`.
    pub fn range_u64(&mut self, low: u64, high: u64) -> u64 {
        self.rng.gen_range(low..=high)
    }

    /// Uniform in `[low, high]`.
    pub fn range_i64(&mut self, low: i64, high: i64) -> i64 {
        self.rng.gen_range(low..=high)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Uniform in `[low, high]` for arbitrary-size bounds.
    pub fn range_int(&mut self, low: &BigInt, high: &BigInt) -> BigInt {
        assert!(low <= high, "empty range");
        let span = (high - low).to_biguint().expect("nonnegative span") + BigUint::one();
        low + BigInt::from(self.rng.gen_biguint_below(&span))
    }
}

/// Floor square root and whether `n` is a perfect square.
pub fn int_isqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::NegativeInput);
    }
    let root = n.sqrt();
    let exact = &root * &root == *n;
    Ok((root, exact))
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    matches!(int_isqrt(n), Ok((_, true)))
}

/// Whether a rational is the square of a rational; returns the
/// nonnegative root when it is.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, nexact) = int_isqrt(q.numer()).ok()?;
    let (d, dexact) = int_isqrt(q.denom()).ok()?;
    (nexact && dexact).then(|| BigRational::new(n, d))
}

/// `base^exponent mod modulus`, result in `[0, modulus)`.
pub fn mod_exp(base: &BigInt, exponent: &BigInt, modulus: &BigInt) -> Result<BigInt> {
    if *modulus < BigInt::from(2) {
        return Err(Error::ModulusTooSmall);
    }
    if exponent.is_negative() {
        return Err(Error::InvalidInstance("negative exponent".into()));
    }
    Ok(base.modpow(exponent, modulus))
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// These bases make Miller-Rabin exact for every n < 2^64.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn strong_probable_prime_u64(n: u64, base: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod_u64(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Exact primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // Bases 2, 7, 61 already suffice below 4759123141.
    let bases: &[u64] = if n < 4_759_123_141 { &[2, 7, 61] } else { &DETERMINISTIC_BASES };
    bases
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn strong_probable_prime(n: &BigInt, base: &BigInt, d: &BigInt, s: u64) -> bool {
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut x = base.modpow(d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Primality test: exact below 2^64, Miller-Rabin with `rounds` random
/// bases above (error at most 4^-rounds).
pub fn is_prime(n: &BigInt, rounds: u32, rng: &mut RngHandle) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().expect("n > 1");
    let d = &n_minus_one >> s;
    let two = BigInt::from(2);
    let high = n - 2u32;
    (0..rounds.max(1)).all(|_| {
        let base = rng.range_int(&two, &high);
        strong_probable_prime(n, &base, &d, s)
    })
}

/// Default attempt budget for [`rand_prime_below`]: `10 * ceil(log2 bound)^2`.
pub fn default_prime_budget(bound: &BigInt) -> u64 {
    let bits = bound.bits().max(1);
    10 * bits * bits
}

/// A random prime `p <= bound` by rejection sampling uniform integers in
/// `[2, bound]`.
///
/// The result is uniform over integers conditioned on primality, which is
/// uniform over primes; primality above 2^64 is probabilistic with
/// `mr_rounds` Miller-Rabin rounds.
pub fn rand_prime_below(bound: &BigInt, rng: &mut RngHandle) -> Result<BigInt> {
    rand_prime_below_with_budget(bound, rng, default_prime_budget(bound), 32)
}

pub fn rand_prime_below_with_budget(
    bound: &BigInt,
    rng: &mut RngHandle,
    budget: u64,
    mr_rounds: u32,
) -> Result<BigInt> {
    if *bound < BigInt::from(3) {
        return Err(Error::BoundTooSmall);
    }
    if let Some(b) = bound.to_u64() {
        for _ in 0..budget {
            let candidate = rng.range_u64(2, b);
            if is_prime_u64(candidate) {
                return Ok(BigInt::from(candidate));
            }
        }
        return Err(Error::SamplingFailed { attempts: budget });
    }
    let two = BigInt::from(2);
    for _ in 0..budget {
        let candidate = rng.range_int(&two, bound);
        if is_prime(&candidate, mr_rounds, rng) {
            return Ok(candidate);
        }
    }
    Err(Error::SamplingFailed { attempts: budget })
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::InvalidInstance(format!("bad rational {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Canonical `"p/q"` (or `"p"` for integers) rendering.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Floor of `log2 |n|` for nonzero `n`.
pub fn ilog2(n: &BigInt) -> u64 {
    n.bits().saturating_sub(1)
}

/// Exact `gcd`-based test used by several oracles.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Serde adapters writing big numbers as decimal / `"p/q"` strings.
pub mod serde_str {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub mod rat {
        use super::*;

        pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&format_rational(q))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
            let text = String::deserialize(d)?;
            parse_rational(&text).map_err(D::Error::custom)
        }
    }

    pub mod rat_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod int {
        use super::*;

        pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&n.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
            let text = String::deserialize(d)?;
            text.trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer {text:?}")))
        }
    }

    pub mod int_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(ToString::to_string))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| D::Error::custom(format!("bad integer {t:?}")))
                })
                .collect()
        }
    }
}
