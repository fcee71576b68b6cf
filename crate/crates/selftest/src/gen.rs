//! Seeded random instance generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use sumroots::loggap::{gap_exponents, LogSumInstance, LogTerm};
use sumroots::ode_sum::{
    OdeSumInstance, OdeTerm, SpecialFamilyInstance, SpecialKind, SpecialTerm, SqrtSumInstance, SqrtTerm,
    TrigFunction,
};
use sumroots::wronskian::{rational_determinant, SeriesFamily};
use sumroots::{Polynomial, RngHandle, TruncatedSeries};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

pub fn nonzero(rng: &mut RngHandle, bound: i64) -> i64 {
    loop {
        let v = rng.range_i64(-bound, bound);
        if v != 0 {
            return v;
        }
    }
}

pub fn small_rational(rng: &mut RngHandle) -> BigRational {
    rat(nonzero(rng, 5), rng.range_i64(1, 3))
}

/// Random polynomial of degree at most `deg` with coefficients in
/// `[-bound, bound]`.
pub fn poly(rng: &mut RngHandle, deg: usize, bound: i64) -> Polynomial {
    Polynomial::from_i64s(&(0..=deg).map(|_| rng.range_i64(-bound, bound)).collect::<Vec<_>>())
}

/// Like [`poly`] with a fixed constant term.
pub fn poly_with_constant(rng: &mut RngHandle, constant: BigRational, deg: usize, bound: i64) -> Polynomial {
    let mut c = vec![constant];
    c.extend((1..=deg).map(|_| BigRational::from_integer(int(rng.range_i64(-bound, bound)))));
    Polynomial::new(c)
}

fn nonzero_poly(rng: &mut RngHandle, deg: usize, bound: i64) -> Polynomial {
    loop {
        let p = poly(rng, deg, bound);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Family of `1..=n_max` polynomials of degree at most `deg_max`, with
/// low-order coefficients zeroed at random so that orders collide.
pub fn family(rng: &mut RngHandle, n_max: usize, deg_max: usize, precision: usize) -> SeriesFamily {
    let n = rng.range_u64(1, n_max as u64) as usize;
    let members = (0..n)
        .map(|_| {
            let shift = rng.range_u64(0, 3) as usize;
            let mut c: Vec<i64> = (0..=deg_max).map(|_| rng.range_i64(-4, 4)).collect();
            for v in c.iter_mut().take(shift) {
                *v = 0;
            }
            if c[shift] == 0 {
                c[shift] = nonzero(rng, 3);
            }
            TruncatedSeries::from_i64s(&c, precision).expect("degree below precision")
        })
        .collect();
    SeriesFamily::new(members).expect("nonempty")
}

/// Random invertible `n x n` rational matrix.
pub fn invertible(rng: &mut RngHandle, n: usize) -> Vec<Vec<BigRational>> {
    loop {
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|_| (0..n).map(|_| rat(rng.range_i64(-4, 4), rng.range_i64(1, 3))).collect())
            .collect();
        if !rational_determinant(&m).is_zero() {
            return m;
        }
    }
}

/// First-order ODE sums with `n <= 4`, `d <= 4`; about a third reuse an
/// earlier equation with a perturbed multiplier so low orders cancel.
pub fn ode_instance(rng: &mut RngHandle) -> OdeSumInstance {
    let n = rng.range_u64(1, 4) as usize;
    let d = rng.range_u64(0, 4) as usize;
    let mut terms: Vec<OdeTerm> = Vec::with_capacity(n);
    for _ in 0..n {
        if !terms.is_empty() && rng.chance(0.35) {
            let base = terms[rng.range_u64(0, terms.len() as u64 - 1) as usize].clone();
            let k = rng.range_u64(1, d.max(1) as u64) as usize;
            let mut bump = vec![0i64; k + 1];
            bump[k] = nonzero(rng, 3);
            let g = base.g.add(&Polynomial::from_i64s(&bump));
            if g.degree() <= d && !g.is_zero() {
                terms.push(OdeTerm { c: -base.c.clone(), g, ..base });
                continue;
            }
        }
        terms.push(OdeTerm {
            c: small_rational(rng),
            g: nonzero_poly(rng, d, 3),
            p: poly(rng, d, 3),
            q: {
                let q0 = BigRational::from_integer(int(nonzero(rng, 3)));
                poly_with_constant(rng, q0, d, 3)
            },
            y0: small_rational(rng),
        });
    }
    OdeSumInstance { d, terms }
}

fn square_constant(rng: &mut RngHandle) -> BigRational {
    let choices = [rat(1, 1), rat(4, 1), rat(9, 4), rat(1, 4), rat(25, 9)];
    choices[rng.range_u64(0, choices.len() as u64 - 1) as usize].clone()
}

/// Square-root sums with `n <= 4`, `d <= 4`, `f_i(0)` a rational square.
pub fn sqrt_instance(rng: &mut RngHandle) -> SqrtSumInstance {
    let n = rng.range_u64(1, 4) as usize;
    let d = rng.range_u64(1, 4) as usize;
    let mut terms: Vec<SqrtTerm> = Vec::with_capacity(n);
    for _ in 0..n {
        if !terms.is_empty() && rng.chance(0.35) {
            let base = terms[rng.range_u64(0, terms.len() as u64 - 1) as usize].clone();
            let k = rng.range_u64(1, d as u64) as usize;
            let mut bump = vec![0i64; k + 1];
            bump[k] = nonzero(rng, 3);
            let f = base.f.add(&Polynomial::from_i64s(&bump));
            terms.push(SqrtTerm { c: -base.c.clone(), g: base.g.clone(), f });
            continue;
        }
        terms.push(SqrtTerm {
            c: small_rational(rng),
            g: nonzero_poly(rng, d, 3),
            f: {
                let f0 = square_constant(rng);
                poly_with_constant(rng, f0, d, 3)
            },
        });
    }
    SqrtSumInstance { d, terms }
}

/// Instances of one special family with `n <= 3`, `d <= 3`.
pub fn special_instance(rng: &mut RngHandle, kind: SpecialKind) -> SpecialFamilyInstance {
    let n = rng.range_u64(1, 3) as usize;
    let d = rng.range_u64(1, 3) as usize;
    let funcs = [TrigFunction::Cos, TrigFunction::Sin, TrigFunction::Cosh, TrigFunction::Sinh];
    let mut terms: Vec<SpecialTerm> = Vec::with_capacity(n);
    for _ in 0..n {
        let c = small_rational(rng);
        let g = nonzero_poly(rng, d, 3);
        let mut f = poly_with_constant(rng, BigRational::zero(), d, 3);
        if f.is_zero() {
            f = Polynomial::from_i64s(&[0, 1]);
        }
        let term = match kind {
            SpecialKind::Exp => SpecialTerm::Exp { c, g, f },
            SpecialKind::CoshSinhCosSin => {
                let func = funcs[rng.range_u64(0, 3) as usize];
                SpecialTerm::Trig { c, g, f, func }
            }
            SpecialKind::RationalPower => SpecialTerm::RationalPower {
                c,
                g,
                p: poly_with_constant(rng, BigRational::one(), d, 3),
                q: poly_with_constant(rng, BigRational::one(), d, 3),
                alpha: rat(nonzero(rng, 5), rng.range_i64(1, 4)),
            },
        };
        terms.push(term);
    }
    SpecialFamilyInstance { kind, d, terms }
}

/// Polynomials with `f(0) = 1` and rational weights; about a third
/// include a product term so that logarithms partly cancel.
pub fn log_order_instance(rng: &mut RngHandle) -> (Vec<BigRational>, Vec<Polynomial>) {
    let n = rng.range_u64(1, 4) as usize;
    let mut c: Vec<BigRational> = Vec::with_capacity(n);
    let mut f: Vec<Polynomial> = Vec::with_capacity(n);
    for i in 0..n {
        if i >= 2 && rng.chance(0.4) {
            let prod = f[0].mul(&f[1]);
            let w = c[0].clone();
            c[1] = w.clone();
            c.push(-w);
            f.push(prod);
            continue;
        }
        c.push(small_rational(rng));
        let deg = rng.range_u64(1, 3) as usize;
        f.push(poly_with_constant(rng, BigRational::one(), deg, 3));
    }
    (c, f)
}

/// Log-sum instances with `A = sum c_i d_i = 0`, built from pairs
/// `(k d_2, d_1)` and `(-k d_1, d_2)`. Half use a base `X` large enough
/// for the gap preconditions.
pub fn log_sum_instance(rng: &mut RngHandle, large: bool) -> LogSumInstance {
    let pairs = rng.range_u64(1, 2) as usize;
    let mut terms = Vec::new();
    for _ in 0..pairs {
        let d1 = rng.range_u64(1, 3) as usize;
        let d2 = rng.range_u64(1, 3) as usize;
        let k = nonzero(rng, 2);
        for (c, deg) in [(k * d2 as i64, d1), (-k * d1 as i64, d2)] {
            let b = (0..deg).map(|_| int(rng.range_i64(-3, 3))).collect();
            terms.push(LogTerm { c: int(c), b });
        }
    }
    let mut inst = LogSumInstance { x: int(0), terms };
    inst.x = if large {
        let (p1, _) = gap_exponents(inst.n() as u64, inst.d() as u64).expect("dn >= 2");
        let base = (inst.big_b() + 1u32).pow(p1 as u32);
        let c2 = inst.big_c() * inst.big_c();
        base.max(c2) + rng.range_u64(1, 1000)
    } else {
        int(rng.range_i64(20, 5000))
    };
    inst
}

/// SSR instance over explicit values `<= 10^6` and at most 8 terms. When
/// `cancelling` every class sums to zero; otherwise classes are drawn
/// freely and cancel only by chance.
pub fn ssr_values(rng: &mut RngHandle, cancelling: bool) -> (Vec<BigInt>, Vec<i8>) {
    const KERNELS: [u64; 12] = [1, 2, 3, 5, 6, 7, 10, 11, 13, 15, 17, 21];
    const LIMIT: u64 = 1_000_000;
    let mut kernels: Vec<u64> = KERNELS.to_vec();
    let mut terms: Vec<(u64, i8)> = Vec::new();
    while terms.len() < 8 && !kernels.is_empty() {
        let r = kernels.remove(rng.range_u64(0, kernels.len() as u64 - 1) as usize);
        let max_s = ((LIMIT / r) as f64).sqrt() as u64;
        let room = 8 - terms.len();
        let before = terms.len();
        if cancelling {
            if room >= 3 && rng.chance(0.5) {
                let s1 = rng.range_u64(1, max_s / 2);
                let s2 = rng.range_u64(1, max_s / 2);
                terms.extend([(r * s1 * s1, 1), (r * s2 * s2, 1), (r * (s1 + s2) * (s1 + s2), -1)]);
            } else if room >= 2 {
                let s = rng.range_u64(1, max_s);
                terms.extend([(r * s * s, 1), (r * s * s, -1)]);
            }
        } else {
            let count = rng.range_u64(1, room.min(3) as u64);
            for _ in 0..count {
                let s = rng.range_u64(1, max_s);
                terms.push((r * s * s, if rng.chance(0.5) { 1 } else { -1 }));
            }
        }
        if terms.len() == before || rng.chance(0.4) {
            break;
        }
    }
    // Fisher-Yates keeps the draw reproducible under the handle.
    for i in (1..terms.len()).rev() {
        let j = rng.range_u64(0, i as u64) as usize;
        terms.swap(i, j);
    }
    terms.into_iter().map(|(v, s)| (BigInt::from(v), s)).unzip()
}
