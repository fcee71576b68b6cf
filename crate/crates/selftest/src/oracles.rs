//! Reference computations that share no code path with the library
//! routines they check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use sumroots::wronskian::SeriesFamily;
use sumroots::TruncatedSeries;

/// `(r, s)` with `n = s^2 r` and `r` squarefree, by trial division.
pub fn squarefree_kernel(mut n: u64) -> (u64, u64) {
    assert!(n > 0);
    let (mut kernel, mut root) = (1u64, 1u64);
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            kernel *= p;
        }
        p += 1;
    }
    (kernel * n, root)
}

fn kernels(values: &[BigInt]) -> Vec<(u64, u64)> {
    values
        .iter()
        .map(|v| squarefree_kernel(u64::try_from(v).expect("oracle needs values below 2^64")))
        .collect()
}

/// Classes of equal squarefree kernel, in order of first appearance.
pub fn kernel_partition(values: &[BigInt]) -> Vec<Vec<usize>> {
    let mut order: Vec<u64> = Vec::new();
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, (r, _)) in kernels(values).into_iter().enumerate() {
        if !groups.contains_key(&r) {
            order.push(r);
        }
        groups.entry(r).or_default().push(i);
    }
    order.iter().map(|r| groups[r].clone()).collect()
}

/// Exact zero test: `sum s_i sqrt(a_i) = 0` iff for each kernel `r` the
/// signed sum of the square parts vanishes.
pub fn kernel_zero(values: &[BigInt], signs: &[i8]) -> bool {
    let mut sums: BTreeMap<u64, i128> = BTreeMap::new();
    for ((r, s), &sign) in kernels(values).into_iter().zip(signs) {
        *sums.entry(r).or_default() += s as i128 * sign as i128;
    }
    sums.values().all(|&v| v == 0)
}

/// Enclosure of `2^bits * sum s_i sqrt(a_i)` from floor square roots.
pub fn sqrt_sum_enclosure(values: &[BigInt], signs: &[i8], bits: u32) -> (BigInt, BigInt) {
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for (a, &s) in values.iter().zip(signs) {
        let scaled: BigInt = a << (2 * bits);
        let r = scaled.sqrt();
        let r_hi = if &r * &r == scaled { r.clone() } else { &r + 1 };
        if s > 0 {
            lo += r;
            hi += r_hi;
        } else {
            lo -= r_hi;
            hi -= r;
        }
    }
    (lo, hi)
}

/// Zero verdict from a 512-bit enclosure, confirmed exactly when the
/// enclosure straddles zero.
pub fn ssr_zero_oracle(values: &[BigInt], signs: &[i8]) -> bool {
    let (lo, hi) = sqrt_sum_enclosure(values, signs, 512);
    if lo.is_positive() || hi.is_negative() {
        return false;
    }
    kernel_zero(values, signs)
}

/// Cofactor expansion along the first row.
pub fn laplace(m: &[Vec<TruncatedSeries>]) -> TruncatedSeries {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = TruncatedSeries::zero(m[0][0].precision());
    for j in 0..n {
        let minor: Vec<Vec<TruncatedSeries>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, s)| s.clone()).collect())
            .collect();
        let term = m[0][j].mul(&laplace(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Wronskian by cofactor expansion of the derivative matrix.
pub fn wronskian_laplace(family: &SeriesFamily) -> TruncatedSeries {
    let n = family.len();
    let p = family.precision() - n + 1;
    let mut rows = vec![family.members().iter().map(|f| f.truncate(p)).collect::<Vec<_>>()];
    let mut current: Vec<TruncatedSeries> = family.members().to_vec();
    for _ in 1..n {
        current = current.iter().map(|f| f.derivative().expect("precision checked")).collect();
        rows.push(current.iter().map(|f| f.truncate(p)).collect());
    }
    laplace(&rows)
}

/// Smallest `q` with `2^t + 2 <= 2^(q/2) / (4 C q) - 2q` by floating-point
/// linear search.
pub fn q_search(t: i32, c: f64) -> u32 {
    (1u32..)
        .find(|&q| {
            let qf = q as f64;
            2f64.powi(t) + 2.0 <= 2f64.powf(qf / 2.0) / (4.0 * c * qf) - 2.0 * qf
        })
        .expect("condition eventually holds")
}

/// `[y^j] log(1 + u)` with `u = b_1 y + ... + b_m y^m`, from explicit
/// truncated powers of `u` in the Mercator series.
pub fn mercator_coefficient(b: &[BigInt], j: usize) -> BigRational {
    let mut u = vec![BigRational::zero(); j + 1];
    for (m, bm) in b.iter().enumerate() {
        if m < j {
            u[m + 1] = BigRational::from_integer(bm.clone());
        }
    }
    let mut power = vec![BigRational::zero(); j + 1];
    power[0] = BigRational::one();
    let mut acc = BigRational::zero();
    for k in 1..=j {
        let mut next = vec![BigRational::zero(); j + 1];
        for (a, pa) in power.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (bdeg, ub) in u.iter().enumerate().take(j + 1 - a) {
                next[a + bdeg] += pa * ub;
            }
        }
        power = next;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc += &power[j] * BigRational::new(BigInt::from(sign), BigInt::from(k));
    }
    acc
}

/// `ceil(20 dn ln dn)` and `ceil(1 + dn (ln dn + 1))` in floating point.
pub fn gap_exponents_f64(n: u64, d: u64) -> (u64, u64) {
    let dn = (n * d) as f64;
    ((20.0 * dn * dn.ln()).ceil() as u64, (1.0 + dn * (dn.ln() + 1.0)).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(squarefree_kernel(1), (1, 1));
        assert_eq!(squarefree_kernel(48), (3, 4));
        assert_eq!(squarefree_kernel(49), (1, 7));
        assert_eq!(squarefree_kernel(999_983), (999_983, 1));
        let v: Vec<BigInt> = [2, 8, 3, 27, 18].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(kernel_partition(&v), vec![vec![0, 1, 4], vec![2, 3]]);
        assert!(kernel_zero(&v[..2].iter().chain(&v[4..]).cloned().collect::<Vec<_>>(), &[1, 1, -1]));
    }

    #[test]
    fn enclosure_and_zero_oracle() {
        let v: Vec<BigInt> = [2, 8, 18].iter().map(|&x| BigInt::from(x)).collect();
        assert!(ssr_zero_oracle(&v, &[1, 1, -1]));
        assert!(!ssr_zero_oracle(&v, &[1, 1, 1]));
        let (lo, hi) = sqrt_sum_enclosure(&[BigInt::from(2)], &[1], 10);
        assert_eq!((lo, hi), (BigInt::from(1448), BigInt::from(1449)));
    }

    #[test]
    fn q_search_and_mercator() {
        assert_eq!(q_search(3, 1.0), 26);
        let one = [BigInt::from(1)];
        assert_eq!(mercator_coefficient(&one, 2), BigRational::new((-1).into(), 2.into()));
        assert_eq!(gap_exponents_f64(2, 2), (111, 11));
    }
}
