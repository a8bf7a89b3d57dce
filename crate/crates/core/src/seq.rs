//! Fibonacci, Lucas and seeded generalized Fibonacci numbers at any integer index.
//!
//! Every value is an unbounded [`BigInt`]. Negative indices are handled at the
//! API boundary by the reflection laws `F(-n) = (-1)^(n+1) F(n)` and
//! `L(-n) = (-1)^n L(n)`; the doubling loop itself only ever sees `n >= 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("empty table range: lo {lo} > hi {hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("internal fault: decomposition numerator {0} is odd")]
    OddDecomposition(BigInt),
}

/// Initial values `G(0)`, `G(1)` of a sequence obeying `G(n+2) = G(n+1) + G(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed {
    pub g0: BigInt,
    pub g1: BigInt,
}

impl Seed {
    pub fn new(g0: impl Into<BigInt>, g1: impl Into<BigInt>) -> Self {
        Seed {
            g0: g0.into(),
            g1: g1.into(),
        }
    }

    /// The seed `(0, 1)` reproducing the Fibonacci numbers.
    pub fn fibonacci() -> Self {
        Seed::new(0, 1)
    }

    /// The seed `(2, 1)` reproducing the Lucas numbers.
    pub fn lucas() -> Self {
        Seed::new(2, 1)
    }

    /// `G(-1) = G(1) - G(0)`.
    pub fn g_minus1(&self) -> BigInt {
        &self.g1 - &self.g0
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g0, self.g1)
    }
}

/// A dense run of consecutive terms `G(lo) ..= G(hi)` of one seeded sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqTable {
    seed: Seed,
    lo: i64,
    values: Vec<BigInt>,
}

impl SeqTable {
    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Option<&BigInt> {
        let offset = n.checked_sub(self.lo)?;
        usize::try_from(offset).ok().and_then(|i| self.values.get(i))
    }
}

/// Returns `(F(n), F(n+1))` using the doubling recurrences
/// `F(2k) = F(k) (2 F(k+1) - F(k))` and `F(2k+1) = F(k)^2 + F(k+1)^2`.
pub fn fib_pair_doubling(n: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    if n == 0 {
        return (a, b);
    }
    let top = 63 - n.leading_zeros();
    for bit in (0..=top).rev() {
        let c = &a * ((&b << 1u32) - &a);
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// `F(n)` by plain forward iteration. O(n) additions; this is the slow path
/// that the doubling path is checked and benchmarked against.
pub fn fib_iterative(n: u64) -> BigInt {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

fn is_odd(n: u64) -> bool {
    n & 1 == 1
}

pub fn fib(n: i64) -> BigInt {
    let (f, _) = fib_pair_doubling(n.unsigned_abs());
    // F(-n) = (-1)^(n+1) F(n): negative exactly when n is even.
    if n < 0 && !is_odd(n.unsigned_abs()) {
        -f
    } else {
        f
    }
}

pub fn lucas(n: i64) -> BigInt {
    let (f, f1) = fib_pair_doubling(n.unsigned_abs());
    let l: BigInt = (f1 << 1u32) - f;
    if n < 0 && is_odd(n.unsigned_abs()) {
        -l
    } else {
        l
    }
}

/// `G(n)` for the given seed, using `G(n) = G(0) F(n-1) + G(1) F(n)`, which
/// holds for every integer `n`.
pub fn gen(seed: &Seed, n: i64) -> BigInt {
    let magnitude = n.unsigned_abs();
    let (fn_abs, fn1_abs) = fib_pair_doubling(magnitude);
    let (f_prev, f_n) = if n >= 0 {
        // F(n-1) = F(n+1) - F(n)
        (&fn1_abs - &fn_abs, fn_abs)
    } else {
        // n = -k: F(-k) and F(-k-1) by reflection.
        let f_n = if is_odd(magnitude) { fn_abs } else { -fn_abs };
        let f_prev = if is_odd(magnitude + 1) {
            fn1_abs
        } else {
            -fn1_abs
        };
        (f_prev, f_n)
    };
    &seed.g0 * f_prev + &seed.g1 * f_n
}

/// Builds `G(lo) ..= G(hi)` with two direct evaluations and then forward
/// recurrence.
pub fn table(seed: &Seed, lo: i64, hi: i64) -> Result<SeqTable, SeqError> {
    if lo > hi {
        return Err(SeqError::EmptyRange { lo, hi });
    }
    let len = (hi - lo) as usize + 1;
    let mut values = Vec::with_capacity(len);
    values.push(gen(seed, lo));
    if len > 1 {
        values.push(gen(seed, lo + 1));
    }
    while values.len() < len {
        let k = values.len();
        let next = &values[k - 1] + &values[k - 2];
        values.push(next);
    }
    Ok(SeqTable {
        seed: seed.clone(),
        lo,
        values,
    })
}

/// Evaluates `((G(-1) + G(1)) F(n) + G(0) L(n)) / 2`.
///
/// The numerator is always even because `F(n)` and `L(n)` share parity; an odd
/// numerator is reported as an internal fault.
pub fn decompose(seed: &Seed, n: i64) -> Result<BigInt, SeqError> {
    let coeff_f = seed.g_minus1() + &seed.g1;
    let numerator = coeff_f * fib(n) + &seed.g0 * lucas(n);
    if numerator.is_odd() {
        return Err(SeqError::OddDecomposition(numerator));
    }
    Ok(numerator >> 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Independent window built by walking the recurrence out from indices 0 and 1.
    fn walk(seed: &Seed, lo: i64, hi: i64) -> Vec<BigInt> {
        let lo_w = lo.min(0);
        let hi_w = hi.max(1);
        let mut fwd = vec![seed.g0.clone(), seed.g1.clone()];
        for i in 2..=hi_w {
            let i = i as usize;
            let v = &fwd[i - 1] + &fwd[i - 2];
            fwd.push(v);
        }
        let mut back: Vec<BigInt> = Vec::new(); // back[j] = G(-1-j)
        for j in 0..(-lo_w) {
            let j = j as usize;
            let (g_next, g_next2) = match j {
                0 => (fwd[0].clone(), fwd[1].clone()),
                1 => (back[0].clone(), fwd[0].clone()),
                _ => (back[j - 1].clone(), back[j - 2].clone()),
            };
            back.push(g_next2 - g_next);
        }
        (lo..=hi)
            .map(|i| {
                if i >= 0 {
                    fwd[i as usize].clone()
                } else {
                    back[(-1 - i) as usize].clone()
                }
            })
            .collect()
    }

    #[test]
    fn fib_examples() {
        assert_eq!(fib(0), big(0));
        assert_eq!(fib(10), big(55));
        assert_eq!(fib(-5), big(5));
        assert_eq!(fib(-6), big(-8));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas(0), big(2));
        assert_eq!(lucas(4), big(7));
        assert_eq!(lucas(-4), big(7));
        assert_eq!(lucas(-3), big(-4));
    }

    #[test]
    fn gen_examples() {
        assert_eq!(gen(&Seed::fibonacci(), 7), big(13));
        assert_eq!(gen(&Seed::lucas(), 5), big(11));
        assert_eq!(gen(&Seed::new(3, 7), -1), big(4));
        assert_eq!(gen(&Seed::new(3, 7), 5), big(44));
    }

    #[test]
    fn gen_matches_walk() {
        for seed in [Seed::new(3, 7), Seed::new(-4, 5), Seed::new(0, 0), Seed::new(1, -9)] {
            let expect = walk(&seed, -40, 40);
            for (i, v) in (-40..=40).zip(expect) {
                assert_eq!(gen(&seed, i), v, "seed {seed} index {i}");
            }
        }
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(fib_pair_doubling(0), (big(0), big(1)));
        assert_eq!(fib_pair_doubling(10), (big(55), big(89)));
        let (f100, f101) = fib_pair_doubling(100);
        assert_eq!(f100.to_string(), "354224848179261915075");
        assert_eq!(f101, fib_iterative(101));
    }

    #[test]
    fn doubling_matches_iteration() {
        for n in 0..=500u64 {
            assert_eq!(fib_pair_doubling(n).0, fib_iterative(n), "n = {n}");
        }
    }

    #[test]
    fn table_examples() {
        let t = table(&Seed::fibonacci(), -3, 3).unwrap();
        let want: Vec<BigInt> = [2, -1, 1, 0, 1, 1, 2].into_iter().map(big).collect();
        assert_eq!(t.values(), &want[..]);
        assert_eq!(t.get(0), Some(&big(0)));
        assert_eq!(t.get(4), None);
        assert_eq!(t.hi(), 3);

        let t = table(&Seed::lucas(), 0, 4).unwrap();
        let want: Vec<BigInt> = [2, 1, 3, 4, 7].into_iter().map(big).collect();
        assert_eq!(t.values(), &want[..]);

        let t = table(&Seed::new(5, 5), 0, 2).unwrap();
        let want: Vec<BigInt> = [5, 5, 10].into_iter().map(big).collect();
        assert_eq!(t.values(), &want[..]);

        let single = table(&Seed::new(5, 5), 7, 7).unwrap();
        assert_eq!(single.values().len(), 1);
    }

    #[test]
    fn table_rejects_inverted_range() {
        assert_eq!(
            table(&Seed::fibonacci(), 3, 2),
            Err(SeqError::EmptyRange { lo: 3, hi: 2 })
        );
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&Seed::fibonacci(), 9).unwrap(), big(34));
        assert_eq!(decompose(&Seed::lucas(), 6).unwrap(), big(18));
        // G: 3, 7, 10, 17, 27
        assert_eq!(decompose(&Seed::new(3, 7), 4).unwrap(), big(27));
    }

    #[test]
    fn recurrence_and_reflection_window() {
        for n in -200..=198 {
            assert_eq!(fib(n + 2), fib(n + 1) + fib(n));
            assert_eq!(lucas(n + 2), lucas(n + 1) + lucas(n));
        }
        for n in 0..=200i64 {
            let sign_f = if (n + 1) % 2 == 0 { 1 } else { -1 };
            let sign_l = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(fib(-n), fib(n) * sign_f);
            assert_eq!(lucas(-n), lucas(n) * sign_l);
        }
    }
}
