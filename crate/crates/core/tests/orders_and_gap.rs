use num_bigint::BigInt;
use num_rational::BigRational;

use sumroots::loggap::{gap_exponents, gap_verify, log_sum_order, sj_bounds_check, Branch, LogSumInstance, LogTerm};
use sumroots::ode_sum::{ode_sum_check_auto, sqrt_sum_check_auto, BoundStatus, OdeSumInstance, OdeTerm, SqrtSumInstance, SqrtTerm};
use sumroots::{Error, OrderResult, Polynomial};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poly(c: &[i64]) -> Polynomial {
    Polynomial::from_i64s(c)
}

#[test]
fn exponentials_with_close_exponents() {
    // e^x - (1 + x) e^0 has order 2; both terms solve first-order ODEs.
    let inst = OdeSumInstance {
        d: 1,
        terms: vec![
            OdeTerm { c: q(1), g: poly(&[1]), p: poly(&[1]), q: poly(&[1]), y0: q(1) },
            OdeTerm { c: q(-1), g: poly(&[1, 1]), p: poly(&[0]), q: poly(&[1]), y0: q(1) },
        ],
    };
    let r = ode_sum_check_auto(&inst).unwrap();
    assert_eq!(r.order, OrderResult::Known(2));
    assert_eq!(r.status, BoundStatus::Holds);
}

#[test]
fn square_root_sum_order() {
    // sqrt(1 + 2x) - (1 + x) = -x^2/2 + ...
    let inst = SqrtSumInstance {
        d: 1,
        terms: vec![
            SqrtTerm { c: q(1), g: poly(&[1]), f: poly(&[1, 2]) },
            SqrtTerm { c: q(-1), g: poly(&[1, 1]), f: poly(&[1]) },
        ],
    };
    let r = sqrt_sum_check_auto(&inst).unwrap();
    assert_eq!(r.order, OrderResult::Known(2));
    assert!(r.holds());
}

#[test]
fn log_sum_with_cancelling_product() {
    let f = poly(&[1, 1]);
    let g = poly(&[1, -2, 3]);
    let r = log_sum_order(&[q(1), q(1), q(-1)], &[f.clone(), g.clone(), f.mul(&g)], 12).unwrap();
    assert_eq!(r.report.status, BoundStatus::ZeroSum);
    assert!(r.routes_agree);
}

#[test]
fn gap_on_three_to_the_111() {
    assert_eq!(gap_exponents(2, 2).unwrap(), (111, 11));
    let x: BigInt = BigInt::from(3u32).pow(111u32) + 1u32;
    let term = |c: i64, b: i64| LogTerm { c: BigInt::from(c), b: vec![BigInt::from(b)] };
    let inst = LogSumInstance { x: x.clone(), terms: vec![term(1, 1), term(-1, 2)] };
    let r = gap_verify(&inst, 256).unwrap();
    assert_eq!(r.branch, Branch::AZero);
    assert!(r.preconditions_met && r.gap_holds);
    assert!(r.abs_e_lower_certified > r.threshold);

    let sj = sj_bounds_check(&inst, 10).unwrap();
    assert!(sj.all_hold());

    let nonzero = LogSumInstance { x, terms: vec![term(2, 1), term(1, 2)] };
    assert_eq!(sj_bounds_check(&nonzero, 4), Err(Error::WrongBranch));
    let r = gap_verify(&nonzero, 256).unwrap();
    assert_eq!(r.half_log_x_holds, Some(true));
}

#[test]
fn exactly_vanishing_form_is_unresolved() {
    // log(X+1) + log(X+1) - 2 log(X+1) = 0.
    let x = BigInt::from(1000);
    let t = |c: i64| LogTerm { c: BigInt::from(c), b: vec![BigInt::from(1)] };
    let inst = LogSumInstance { x, terms: vec![t(1), t(1), t(-2)] };
    assert_eq!(gap_verify(&inst, 128).map(|_| ()), Err(Error::Unresolved));
}
