//! Wronskians of families of truncated series and the order identities
//! tying the Wronskian's order to the orders reachable in the span.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{OrderResult, TruncatedSeries};

/// An ordered family of series trimmed to a shared precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesFamily {
    members: Vec<TruncatedSeries>,
}

impl SeriesFamily {
    pub fn new(members: Vec<TruncatedSeries>) -> Result<Self> {
        let p = members
            .iter()
            .map(TruncatedSeries::precision)
            .min()
            .ok_or(Error::EmptyInput)?;
        Ok(SeriesFamily {
            members: members.iter().map(|m| m.truncate(p)).collect(),
        })
    }

    pub fn members(&self) -> &[TruncatedSeries] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn precision(&self) -> usize {
        self.members[0].precision()
    }

    /// Family `members · transform`, i.e. member `j` of the result is
    /// `sum_i members[i] * transform[i][j]`.
    pub fn transformed(&self, transform: &[Vec<BigRational>]) -> Result<Self> {
        let n = self.len();
        if transform.len() != n || transform.iter().any(|row| row.len() != n) {
            return Err(Error::LengthMismatch { left: n, right: transform.len() });
        }
        let members = (0..n)
            .map(|j| {
                let column: Vec<BigRational> = transform.iter().map(|row| row[j].clone()).collect();
                TruncatedSeries::linear_combine(&column, &self.members)
            })
            .collect::<Result<Vec<_>>>()?;
        SeriesFamily::new(members)
    }
}

/// `(d)_k = d (d-1) ... (d-k+1)`, with `(d)_0 = 1`.
pub fn falling_factorial(d: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * (d - i))
}

/// `prod_{i<j} (d_j - d_i)`.
pub fn vandermonde(d: &[i64]) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..d.len() {
        for i in 0..j {
            acc *= d[j] - d[i];
        }
    }
    acc
}

/// `n (n - 1) / 2`.
pub fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Rows are successive derivatives `f^(0) .. f^(n-1)`, all trimmed to the
/// precision of the last row, `P - n + 1`.
pub fn wronskian_matrix(family: &SeriesFamily) -> Result<Vec<Vec<TruncatedSeries>>> {
    let n = family.len();
    let p = family.precision();
    if p < n {
        return Err(Error::InsufficientPrecision { precision: p, needed: n });
    }
    let target = p - n + 1;
    let mut rows = Vec::with_capacity(n);
    let mut current: Vec<TruncatedSeries> = family.members().to_vec();
    for r in 0..n {
        rows.push(current.iter().map(|s| s.truncate(target)).collect());
        if r + 1 < n {
            current = current
                .iter()
                .map(TruncatedSeries::derivative)
                .collect::<Result<Vec<_>>>()?;
        }
    }
    Ok(rows)
}

/// Determinant of a square matrix of series sharing one precision `N`.
///
/// Integer series truncated to its length.
type IntSeries = Vec<BigInt>;

fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntSeries {
    let p = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); p];
    for (i, x) in a[..p].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b[..p - i].iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn int_order(a: &[BigInt]) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}

/// `a / d` for `d(0) != 0`. With `c = d(0)` the quotient is
/// `N_k / c^(k+1)` where `N_k = a_k c^k - sum_{j>=1} d_j N_{k-j} c^(j-1)`,
/// so only the final coefficients are reduced.
fn int_divide(a: &[BigInt], d: &[BigInt]) -> TruncatedSeries {
    let p = a.len().min(d.len());
    if p == 0 {
        return TruncatedSeries::zero(0);
    }
    let c = &d[0];
    let mut powers = vec![BigInt::one()];
    for k in 1..=p {
        powers.push(&powers[k - 1] * c);
    }
    let mut num: Vec<BigInt> = Vec::with_capacity(p);
    for k in 0..p {
        let mut v = &a[k] * &powers[k];
        for j in 1..=k {
            if !d[j].is_zero() && !num[k - j].is_zero() {
                v -= &d[j] * &num[k - j] * &powers[j - 1];
            }
        }
        num.push(v);
    }
    TruncatedSeries::from_coeffs(
        num.into_iter()
            .enumerate()
            .map(|(k, v)| BigRational::new(v, powers[k + 1].clone()))
            .collect(),
    )
}

/// Determinant of a square matrix of series sharing one precision `N`.
///
/// Columns are scaled to integer coefficients first. Elimination is
/// fraction-free on unit pivots: with pivot `u` each other row becomes
/// `u row - row[0] top`, which scales the remaining block by `u^(r-1)`.
/// The pivot powers and column scales are divided out once at the end.
/// When no unit is left in the active block, every entry is divisible by
/// `x^k` for the block's minimal order `k`, so `x^k` is pulled out of each
/// of its rows. That costs `k` coefficients per entry but contributes
/// `x^(k r)` to the determinant, so the result is still known modulo `x^N`.
pub fn series_determinant(matrix: &[Vec<TruncatedSeries>]) -> Result<TruncatedSeries> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::LengthMismatch { left: n, right: matrix[0].len() });
    }
    let precision = matrix
        .iter()
        .flatten()
        .map(TruncatedSeries::precision)
        .min()
        .expect("nonempty");
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<IntSeries>> = vec![Vec::with_capacity(n); n];
    for j in 0..n {
        let l = (0..n)
            .flat_map(|i| matrix[i][j].coeffs()[..precision].iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        for (i, row) in m.iter_mut().enumerate() {
            row.push(matrix[i][j].coeffs()[..precision].iter().map(|c| (c * &l).to_integer()).collect());
        }
        scale *= l;
    }
    let mut shift = 0usize;
    let mut negate = false;
    let mut acc: IntSeries = int_one(precision);
    let mut divisor: IntSeries = int_one(precision);

    while !m.is_empty() {
        let r = m.len();
        let Some(k) = m.iter().flatten().filter_map(|s| int_order(s)).min() else {
            return Ok(TruncatedSeries::zero(precision));
        };
        if k > 0 {
            for s in m.iter_mut().flatten() {
                s.drain(..k);
            }
            shift += k * r;
        }
        // Pivot: first unit in column-major order.
        let (pi, pj) = (0..r)
            .flat_map(|j| (0..r).map(move |i| (i, j)))
            .find(|&(i, j)| int_order(&m[i][j]) == Some(0))
            .expect("an entry of minimal order is a unit after the shift");
        if pi != 0 {
            m.swap(0, pi);
            negate = !negate;
        }
        if pj != 0 {
            for row in m.iter_mut() {
                row.swap(0, pj);
            }
            negate = !negate;
        }
        let top = m.remove(0);
        let pivot = &top[0];
        // det = pivot * det(block) / pivot^(r-1).
        if r == 1 {
            acc = int_mul(&acc, pivot);
        }
        for _ in 2..r {
            divisor = int_mul(&divisor, pivot);
        }
        for row in m.iter_mut() {
            let factor = row.remove(0);
            let skip = int_order(&factor).is_none();
            for (c, entry) in row.iter_mut().enumerate() {
                let scaled = int_mul(entry, pivot);
                *entry = if skip {
                    scaled
                } else {
                    let sub = int_mul(&factor, &top[c + 1]);
                    scaled.into_iter().zip(sub).map(|(a, b)| a - b).collect()
                };
            }
        }
    }

    let divisor: IntSeries = divisor.into_iter().map(|c| c * &scale).collect();
    let mut acc = int_divide(&acc, &divisor);
    if negate {
        acc = acc.neg();
    }
    let mut coeffs = vec![BigRational::zero(); shift];
    coeffs.extend(acc.coeffs().iter().cloned());
    coeffs.resize(precision.max(coeffs.len()), BigRational::zero());
    coeffs.truncate(precision);
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

fn int_one(precision: usize) -> IntSeries {
    let mut v = vec![BigInt::zero(); precision];
    if precision > 0 {
        v[0] = BigInt::one();
    }
    v
}

/// Wronskian determinant; precision `P - n + 1`.
pub fn wronskian_det(family: &SeriesFamily) -> Result<TruncatedSeries> {
    series_determinant(&wronskian_matrix(family)?)
}

pub fn wronskian_order(family: &SeriesFamily) -> Result<OrderResult> {
    Ok(wronskian_det(family)?.order())
}

/// Basis of the span with pairwise distinct orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctOrderBasis {
    pub basis: Vec<TruncatedSeries>,
    /// Orders of `basis`, index-aligned (distinct, not necessarily sorted).
    pub orders: Vec<usize>,
    /// `basis[j] = sum_i members[i] * transform[i][j]`.
    pub transform: Vec<Vec<BigRational>>,
}

impl DistinctOrderBasis {
    pub fn sorted_orders(&self) -> Vec<usize> {
        let mut o = self.orders.clone();
        o.sort_unstable();
        o
    }
}

/// Repeated elimination: while two members share an order `k`, the later
/// one has its `x^k` coefficient cancelled by a multiple of the earlier.
pub fn distinct_order_basis(family: &SeriesFamily) -> Result<DistinctOrderBasis> {
    let n = family.len();
    let mut basis: Vec<TruncatedSeries> = family.members().to_vec();
    let mut transform: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    loop {
        let mut orders = Vec::with_capacity(n);
        for (index, b) in basis.iter().enumerate() {
            match b.order() {
                OrderResult::Known(k) => orders.push(k),
                OrderResult::AtLeast(_) => return Err(Error::RankDeficientWithinPrecision { index }),
            }
        }
        let clash = (1..n).find_map(|j| (0..j).find(|&i| orders[i] == orders[j]).map(|i| (i, j)));
        let Some((i, j)) = clash else {
            return Ok(DistinctOrderBasis { basis, orders, transform });
        };
        let k = orders[j];
        let lambda = basis[j].coeffs()[k].clone() / basis[i].coeffs()[k].clone();
        basis[j] = basis[j].sub(&basis[i].scale(&lambda));
        for row in transform.iter_mut() {
            let delta = &row[i] * &lambda;
            row[j] -= delta;
        }
    }
}

/// Maximal order of a nonzero element of the span.
pub fn max_linear_order(family: &SeriesFamily) -> Result<usize> {
    let basis = distinct_order_basis(family)?;
    Ok(basis.orders.into_iter().max().expect("nonempty family"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderIdentityReport {
    pub n: usize,
    pub precision: usize,
    pub w_ord: OrderResult,
    pub orders: Vec<usize>,
    pub sum_orders: usize,
    pub binom_term: usize,
    pub max_order: usize,
    /// `w_ord == sum d_i - C(n,2)`.
    pub identity_holds: bool,
    /// `max_order <= w_ord + n - 1`.
    pub upper_bound_holds: bool,
    /// `w_ord <= n * max_order - C(n,2)`.
    pub lower_bound_holds: bool,
    pub upper_bound_tight: bool,
}

impl OrderIdentityReport {
    pub fn all_hold(&self) -> bool {
        self.identity_holds && self.upper_bound_holds && self.lower_bound_holds
    }
}

pub fn check_order_identity(family: &SeriesFamily) -> Result<OrderIdentityReport> {
    let n = family.len();
    let w = wronskian_order(family)?;
    let w_ord = w.known().ok_or(Error::Indeterminate)?;
    let basis = match distinct_order_basis(family) {
        Ok(b) => b,
        // A vanishing member only means cancellation beyond the precision
        // when the Wronskian itself is known to be nonzero.
        Err(Error::RankDeficientWithinPrecision { .. }) => return Err(Error::Indeterminate),
        Err(e) => return Err(e),
    };
    let sum_orders: usize = basis.orders.iter().sum();
    let max_order = *basis.orders.iter().max().expect("nonempty");
    let binom_term = binom2(n);
    let identity_holds = sum_orders >= binom_term && w_ord == sum_orders - binom_term;
    let upper_bound_holds = max_order <= w_ord + n - 1;
    let lower_bound_holds = w_ord + binom_term <= n * max_order;
    Ok(OrderIdentityReport {
        n,
        precision: family.precision(),
        w_ord: w,
        orders: basis.sorted_orders(),
        sum_orders,
        binom_term,
        max_order,
        identity_holds,
        upper_bound_holds,
        lower_bound_holds,
        upper_bound_tight: max_order == w_ord + n - 1,
    })
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_determinant(matrix: &[Vec<BigRational>]) -> BigRational {
    let n = matrix.len();
    let mut m: Vec<Vec<BigRational>> = matrix.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let delta = &f * &m[c][k];
                m[r][k] -= delta;
            }
        }
    }
    det
}
