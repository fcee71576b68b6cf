//! Straight-line programs over `{+, -, *}` computing integers.
//!
//! Register 0 holds the literal 1; instruction `i` (1-based) defines
//! register `i` from two earlier registers, and the program computes its
//! last register. The text format is:
//!
//! ```text
//! SLP v1
//! ADD 0 0    # r1 = 2
//! MUL 1 1    # r2 = 4
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::RngHandle;

pub const HEADER: &str = "SLP v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

impl Op {
    pub fn mnemonic(self) -> &'static str {
        match self {
            Op::Add => "ADD",
            Op::Sub => "SUB",
            Op::Mul => "MUL",
        }
    }
}

impl FromStr for Op {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "ADD" => Ok(Op::Add),
            "SUB" => Ok(Op::Sub),
            "MUL" => Ok(Op::Mul),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub op: Op,
    pub j: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Slp {
    instructions: Vec<Instruction>,
}

impl Slp {
    /// Builds a program, rejecting references to undefined registers.
    pub fn new(instructions: Vec<Instruction>) -> Result<Self> {
        for (idx, ins) in instructions.iter().enumerate() {
            let register = idx + 1;
            for r in [ins.j, ins.k] {
                if r >= register {
                    return Err(Error::ForwardReference { line: register + 1, register: r });
                }
            }
        }
        Ok(Slp { instructions })
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Number of instructions `t`.
    pub fn size(&self) -> usize {
        self.instructions.len()
    }

    /// Index of the output register.
    pub fn output(&self) -> usize {
        self.instructions.len()
    }

    /// Evaluates exactly, failing as soon as an intermediate needs more
    /// than `bit_limit` bits.
    pub fn eval_exact(&self, bit_limit: u64) -> Result<BigInt> {
        let mut regs: Vec<BigInt> = Vec::with_capacity(self.size() + 1);
        regs.push(BigInt::one());
        for (idx, ins) in self.instructions.iter().enumerate() {
            let (a, b) = (&regs[ins.j], &regs[ins.k]);
            let estimate = match ins.op {
                Op::Add | Op::Sub => a.bits().max(b.bits()) + 1,
                Op::Mul => a.bits() + b.bits(),
            };
            // The estimate overshoots by at most one bit; confirm exactly
            // only when it is borderline.
            if estimate > bit_limit + 1 {
                return Err(Error::BitLimitExceeded { instruction: idx + 1, limit: bit_limit });
            }
            let v = match ins.op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
            };
            if v.bits() > bit_limit {
                return Err(Error::BitLimitExceeded { instruction: idx + 1, limit: bit_limit });
            }
            regs.push(v);
        }
        Ok(regs.pop().expect("register 0 always present"))
    }

    /// The value modulo `modulus`, in `[0, modulus)`, using `O(t)` modular
    /// operations.
    pub fn eval_mod(&self, modulus: &BigInt) -> Result<BigInt> {
        if *modulus < BigInt::from(2) {
            return Err(Error::ModulusTooSmall);
        }
        if let Some(m) = modulus.to_u64() {
            return Ok(BigInt::from(self.eval_mod_u64(m)));
        }
        let mut regs: Vec<BigInt> = Vec::with_capacity(self.size() + 1);
        regs.push(BigInt::one() % modulus);
        for ins in &self.instructions {
            let (a, b) = (&regs[ins.j], &regs[ins.k]);
            let v = match ins.op {
                Op::Add => (a + b) % modulus,
                Op::Sub => {
                    let d = a - b;
                    if d.is_negative() {
                        d + modulus
                    } else {
                        d
                    }
                }
                Op::Mul => (a * b) % modulus,
            };
            regs.push(v);
        }
        Ok(regs.pop().expect("register 0 always present"))
    }

    /// [`eval_mod`](Self::eval_mod) for a modulus that fits in 64 bits.
    pub fn eval_mod_u64(&self, m: u64) -> u64 {
        assert!(m >= 2, "modulus must be at least 2");
        let m128 = m as u128;
        let mut regs: Vec<u64> = Vec::with_capacity(self.size() + 1);
        regs.push(1 % m);
        for ins in &self.instructions {
            let (a, b) = (regs[ins.j] as u128, regs[ins.k] as u128);
            let v = match ins.op {
                Op::Add => (a + b) % m128,
                Op::Sub => (a + m128 - b) % m128,
                Op::Mul => (a * b) % m128,
            };
            regs.push(v as u64);
        }
        regs.pop().expect("register 0 always present")
    }

    /// Program computing the product of the two values, of size
    /// `size(a) + size(b) + 1`.
    pub fn product(a: &Slp, b: &Slp) -> Slp {
        let sa = a.size();
        let remap = |r: usize| if r == 0 { 0 } else { r + sa };
        let mut instructions = a.instructions.clone();
        instructions.extend(b.instructions.iter().map(|ins| Instruction {
            op: ins.op,
            j: remap(ins.j),
            k: remap(ins.k),
        }));
        instructions.push(Instruction { op: Op::Mul, j: a.output(), k: remap(b.output()) });
        Slp { instructions }
    }

    /// Binary-expansion program for an integer: doubling and adding 1 bit by
    /// bit, then negating through `0 - |n|` when needed.
    pub fn for_integer(n: &BigInt) -> Slp {
        let mut instructions = Vec::new();
        let magnitude = n.abs();
        if magnitude.is_zero() {
            instructions.push(Instruction { op: Op::Sub, j: 0, k: 0 });
            return Slp { instructions };
        }
        let bits = magnitude.bits();
        let mut acc = 0usize;
        for i in (0..bits - 1).rev() {
            instructions.push(Instruction { op: Op::Add, j: acc, k: acc });
            acc = instructions.len();
            if magnitude.bit(i) {
                instructions.push(Instruction { op: Op::Add, j: acc, k: 0 });
                acc = instructions.len();
            }
        }
        if n.is_negative() {
            instructions.push(Instruction { op: Op::Sub, j: 0, k: 0 });
            let zero = instructions.len();
            instructions.push(Instruction { op: Op::Sub, j: zero, k: acc });
        }
        Slp { instructions }
    }

    /// Uniformly random opcodes and operands.
    pub fn random(size: usize, rng: &mut RngHandle) -> Slp {
        let instructions = (1..=size)
            .map(|i| {
                let op = match rng.range_u64(0, 2) {
                    0 => Op::Add,
                    1 => Op::Sub,
                    _ => Op::Mul,
                };
                let j = rng.range_u64(0, i as u64 - 1) as usize;
                let k = rng.range_u64(0, i as u64 - 1) as usize;
                Instruction { op, j, k }
            })
            .collect();
        Slp { instructions }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Slp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        for ins in &self.instructions {
            writeln!(f, "{} {} {}", ins.op.mnemonic(), ins.j, ins.k)?;
        }
        Ok(())
    }
}

/// Parses the `SLP v1` text format. Blank lines and `#` comments are
/// ignored; the i-th instruction line defines register i.
pub fn parse_slp(text: &str) -> Result<Slp> {
    let mut header_seen = false;
    let mut instructions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err(Error::Parse { line: line_no, message: format!("expected header {HEADER:?}") });
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `OP j k`, found {} fields", fields.len()),
            });
        }
        let op: Op = fields[0]
            .parse()
            .map_err(|_| Error::UnknownOpcode { line: line_no, opcode: fields[0].to_string() })?;
        let register = instructions.len() + 1;
        let operand = |s: &str| -> Result<usize> {
            let r: usize = s.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad register index {s:?}"),
            })?;
            if r >= register {
                return Err(Error::ForwardReference { line: line_no, register: r });
            }
            Ok(r)
        };
        let j = operand(fields[1])?;
        let k = operand(fields[2])?;
        instructions.push(Instruction { op, j, k });
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, message: format!("missing header {HEADER:?}") });
    }
    Ok(Slp { instructions })
}

impl FromStr for Slp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_slp(s)
    }
}

/// Whether `|value| <= 2^(2^t)`.
pub fn within_value_bound(value: &BigInt, t: usize) -> bool {
    if t >= 63 {
        return true;
    }
    let exponent = 1u64 << t;
    let bits = value.bits();
    bits <= exponent || (bits == exponent + 1 && value.abs() == BigInt::one() << exponent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn slp(body: &str) -> Slp {
        parse_slp(&format!("{HEADER}\n{body}")).unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = slp("ADD 0 0\nMUL 1 1\nMUL 2 2");
        assert_eq!(p.size(), 3);
        assert_eq!(p.eval_exact(64).unwrap(), int(16));
        let empty = parse_slp(HEADER).unwrap();
        assert_eq!(empty.size(), 0);
        assert_eq!(empty.eval_exact(8).unwrap(), int(1));
        assert_eq!(
            parse_slp(&format!("{HEADER}\nMUL 0 5")),
            Err(Error::ForwardReference { line: 2, register: 5 })
        );
    }

    #[test]
    fn parse_errors_and_comments() {
        let p = parse_slp("# leading comment\nSLP v1\n\nADD 0 0 # two\n   \nMUL 1 1\n").unwrap();
        assert_eq!(p.eval_exact(64).unwrap(), int(4));
        assert!(matches!(parse_slp("ADD 0 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_slp(""), Err(Error::Parse { .. })));
        assert_eq!(
            parse_slp(&format!("{HEADER}\nDIV 0 0")),
            Err(Error::UnknownOpcode { line: 2, opcode: "DIV".into() })
        );
        assert!(matches!(parse_slp(&format!("{HEADER}\nADD 0")), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_slp(&format!("{HEADER}\nADD 0 x")), Err(Error::Parse { line: 2, .. })));
        // Self-reference is a forward reference too.
        assert!(matches!(parse_slp(&format!("{HEADER}\nADD 1 0")), Err(Error::ForwardReference { .. })));
    }

    #[test]
    fn text_round_trip() {
        let p = slp("ADD 0 0\nSUB 1 0\nMUL 2 1");
        assert_eq!(parse_slp(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn eval_exact_examples() {
        let p = slp("ADD 0 0\nMUL 1 1\nMUL 2 2");
        let v = p.eval_exact(1 << 20).unwrap();
        assert!(within_value_bound(&v, p.size()));
        assert!(v <= int(256));

        let mut body = String::from("ADD 0 0\n");
        for i in 1..25 {
            body.push_str(&format!("MUL {i} {i}\n"));
        }
        let squaring = slp(&body);
        assert_eq!(squaring.size(), 25);
        assert!(matches!(squaring.eval_exact(1 << 20), Err(Error::BitLimitExceeded { .. })));
        assert_eq!(slp("SUB 0 0").eval_exact(8).unwrap(), int(0));
    }

    #[test]
    fn bit_limit_reports_instruction() {
        let p = slp("ADD 0 0\nMUL 1 1\nMUL 2 2\nMUL 3 3");
        // Values 2, 4, 16, 256: 256 needs 9 bits.
        assert_eq!(p.eval_exact(9).unwrap(), int(256));
        assert_eq!(p.eval_exact(8), Err(Error::BitLimitExceeded { instruction: 4, limit: 8 }));
    }

    #[test]
    fn eval_mod_examples() {
        let p = slp("ADD 0 0\nMUL 1 1\nMUL 2 2");
        assert_eq!(p.eval_mod(&int(7)).unwrap(), int(2));
        assert_eq!(slp("SUB 0 0").eval_mod(&int(13)).unwrap(), int(0));
        assert_eq!(slp("SUB 0 0\nSUB 1 0").eval_mod(&int(13)).unwrap(), int(12));
        assert_eq!(p.eval_mod(&int(1)), Err(Error::ModulusTooSmall));
        let big = (BigInt::one() << 100) + 277;
        assert_eq!(p.eval_mod(&big).unwrap(), int(16));
    }

    #[test]
    fn parity_matches_exact() {
        let mut rng = RngHandle::new(11);
        for _ in 0..200 {
            let p = Slp::random(8, &mut rng);
            let exact = p.eval_exact(1 << 16).unwrap();
            let parity = exact.mod_floor_i(2);
            assert_eq!(p.eval_mod(&int(2)).unwrap(), parity);
        }
    }

    trait ModFloor {
        fn mod_floor_i(&self, m: i64) -> BigInt;
    }

    impl ModFloor for BigInt {
        fn mod_floor_i(&self, m: i64) -> BigInt {
            num_integer::Integer::mod_floor(self, &int(m))
        }
    }

    #[test]
    fn product_examples() {
        let a = slp("ADD 0 0\nMUL 1 1\nMUL 2 2");
        let b = slp("ADD 0 0\nADD 1 0\nMUL 2 1");
        let prod = Slp::product(&a, &b);
        assert_eq!(prod.size(), 7);
        assert_eq!(prod.eval_exact(64).unwrap(), int(16 * 6));
        let one = Slp::default();
        assert_eq!(Slp::product(&one, &b).eval_exact(64).unwrap(), int(6));
        assert_eq!(Slp::product(&b, &one).eval_exact(64).unwrap(), int(6));
        let six = Slp::for_integer(&int(6));
        let eight = Slp::for_integer(&int(8));
        let p = Slp::product(&six, &eight);
        assert_eq!(p.size(), six.size() + eight.size() + 1);
        assert_eq!(p.eval_exact(64).unwrap(), int(48));
    }

    #[test]
    fn for_integer_values() {
        for v in [-37i64, -1, 0, 1, 2, 3, 48, 49, 1_000_003] {
            let p = Slp::for_integer(&int(v));
            assert_eq!(p.eval_exact(64).unwrap(), int(v), "value {v}");
        }
    }

    #[test]
    fn new_rejects_forward_reference() {
        let bad = vec![Instruction { op: Op::Add, j: 0, k: 1 }];
        assert!(matches!(Slp::new(bad), Err(Error::ForwardReference { .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn mod_matches_exact(seed in any::<u64>(), size in 0usize..=12, m in 2u64..1_000_000_007) {
                let p = Slp::random(size, &mut RngHandle::new(seed));
                let exact = p.eval_exact(1 << 13).unwrap();
                prop_assert!(within_value_bound(&exact, size));
                let expected = num_integer::Integer::mod_floor(&exact, &BigInt::from(m));
                prop_assert_eq!(p.eval_mod(&BigInt::from(m)).unwrap(), expected);
            }
        }
    }
}
