use num_bigint::BigInt;

use sumroots::slp::{parse_slp, Slp};
use sumroots::sqtest::{check_witness, perfect_square_slp, SquareTestConfig};
use sumroots::ssr::{certified_sum, decide_ssr_eq, decide_ssr_slp, SsrInstance};
use sumroots::{Error, RngHandle};

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn text_programs_feed_the_square_test() {
    let seventy_two = parse_slp("SLP v1\nADD 0 0\nADD 1 0\nMUL 2 2\nMUL 3 1\nMUL 4 1\nMUL 5 1\n# 9 * 8 = 72\n").unwrap();
    assert_eq!(seventy_two.eval_exact(64).unwrap(), int(72));
    let cfg = SquareTestConfig::default();
    let mut rng = RngHandle::new(11);
    let r = perfect_square_slp(&seventy_two, &cfg, &mut rng).unwrap();
    let p = r.verdict.witness().expect("72 is not a square");
    assert!(check_witness(&seventy_two, p).unwrap());

    let sq = Slp::product(&seventy_two, &Slp::for_integer(&int(2)));
    let r = perfect_square_slp(&sq, &cfg, &mut rng).unwrap();
    assert!(r.verdict.is_probably_square());
    assert_eq!(r.slp_size, sq.size());
}

#[test]
fn randomized_and_exact_decisions_agree() {
    let cases: [(&[i64], &[i8]); 4] = [
        (&[2, 8, 18], &[1, 1, -1]),
        (&[3, 12, 5, 20], &[1, -1, 1, 1]),
        (&[7, 7, 28, 63], &[1, 1, 1, -1]),
        (&[1, 4, 9], &[1, 1, -1]),
    ];
    let cfg = SquareTestConfig::default();
    for (seed, (vals, signs)) in cases.iter().enumerate() {
        let values: Vec<BigInt> = vals.iter().map(|&v| int(v)).collect();
        let exact = decide_ssr_eq(&values, signs).unwrap();
        let inst = SsrInstance::from_values(&values, signs.to_vec()).unwrap();
        let mut rng = RngHandle::new(seed as u64);
        let randomized = decide_ssr_slp(&inst, &cfg, &mut rng, 1 << 16).unwrap();
        assert_eq!(exact.is_zero, randomized.is_zero, "{vals:?}");
        assert_eq!(exact.partition, randomized.partition);
        let enclosure = certified_sum(&values, signs, 256).unwrap();
        assert_eq!(enclosure.contains_zero(), exact.is_zero);
    }
}

#[test]
fn bit_limit_is_enforced() {
    let mut p = Slp::for_integer(&int(3));
    for _ in 0..6 {
        p = Slp::product(&p, &p);
    }
    assert!(matches!(p.eval_exact(32), Err(Error::BitLimitExceeded { .. })));
    let inst = SsrInstance::new(vec![p.clone(), p], vec![1, -1]).unwrap();
    let mut rng = RngHandle::new(0);
    let r = decide_ssr_slp(&inst, &SquareTestConfig::default(), &mut rng, 32);
    assert!(matches!(r, Err(Error::BitLimitExceeded { .. })));
}
