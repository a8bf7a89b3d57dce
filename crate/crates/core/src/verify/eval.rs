use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use super::ParamPoint;
use crate::dsl::{print_expr, Expr, SeqKind};
use crate::seq::{self, Seed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("symbol `{0}` has no value")]
    Unbound(String),
    #[error("exponent of `{expr}` evaluates to {value} < 0")]
    NegativeExponent { expr: String, value: i64 },
    #[error("exponent {0} is too large")]
    ExponentTooLarge(i64),
    #[error("index arithmetic overflows in `{0}`")]
    Overflow(String),
    #[error("sum bounds {lo}..{hi} are not a (possibly empty) range")]
    InvalidSumBounds { lo: i64, hi: i64 },
}

/// Where sequence values come from during evaluation.
pub(crate) trait SeqLookup: Sync {
    fn fib(&self, n: i64) -> BigInt;
    fn lucas(&self, n: i64) -> BigInt;
    fn gen(&self, seed: &Seed, n: i64) -> BigInt;
}

/// Straight calls into the sequence engine.
pub(crate) struct Direct;

impl SeqLookup for Direct {
    fn fib(&self, n: i64) -> BigInt {
        seq::fib(n)
    }
    fn lucas(&self, n: i64) -> BigInt {
        seq::lucas(n)
    }
    fn gen(&self, seed: &Seed, n: i64) -> BigInt {
        seq::gen(seed, n)
    }
}

/// `n choose k` by the multiplicative formula; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Exact value of one side of an identity at `pt`.
pub fn eval_side(ast: &Expr, pt: &ParamPoint) -> Result<BigInt, EvalError> {
    eval_with(ast, pt, &Direct)
}

pub(crate) fn eval_with(ast: &Expr, pt: &ParamPoint, lookup: &dyn SeqLookup) -> Result<BigInt, EvalError> {
    Evaluator { pt, lookup, bound: None }.value(ast)
}

struct Evaluator<'a> {
    pt: &'a ParamPoint,
    lookup: &'a dyn SeqLookup,
    bound: Option<(&'a str, i64)>,
}

fn overflow(e: &Expr) -> EvalError {
    EvalError::Overflow(print_expr(e))
}

impl<'a> Evaluator<'a> {
    fn lookup_sym(&self, name: &str) -> Result<i64, EvalError> {
        match self.bound {
            Some((var, k)) if var == name => Ok(k),
            _ => self.pt.get(name).ok_or_else(|| EvalError::Unbound(name.to_string())),
        }
    }

    pub(crate) fn index(&self, e: &Expr) -> Result<i64, EvalError> {
        match e {
            Expr::Int(v) => Ok(*v),
            Expr::Sym(s) => self.lookup_sym(s),
            Expr::Neg(a) => self.index(a)?.checked_neg().ok_or_else(|| overflow(e)),
            Expr::Add(a, b) => self.index(a)?.checked_add(self.index(b)?).ok_or_else(|| overflow(e)),
            Expr::Sub(a, b) => self.index(a)?.checked_sub(self.index(b)?).ok_or_else(|| overflow(e)),
            Expr::Mul(a, b) => self.index(a)?.checked_mul(self.index(b)?).ok_or_else(|| overflow(e)),
            // the parser only admits index expressions in index positions
            other => unreachable!("non-index expression in index position: {}", print_expr(other)),
        }
    }

    fn exponent(&self, e: &Expr, at: &Expr) -> Result<u32, EvalError> {
        let v = self.index(e)?;
        if v < 0 {
            return Err(EvalError::NegativeExponent { expr: print_expr(at), value: v });
        }
        u32::try_from(v).map_err(|_| EvalError::ExponentTooLarge(v))
    }

    fn value(&self, e: &Expr) -> Result<BigInt, EvalError> {
        Ok(match e {
            Expr::Int(v) => BigInt::from(*v),
            Expr::Sym(s) => BigInt::from(self.lookup_sym(s)?),
            Expr::Neg(a) => -self.value(a)?,
            Expr::Add(a, b) => self.value(a)? + self.value(b)?,
            Expr::Sub(a, b) => self.value(a)? - self.value(b)?,
            Expr::Mul(a, b) => self.value(a)? * self.value(b)?,
            Expr::Pow(a, b) => {
                let exp = self.exponent(b, e)?;
                Pow::pow(self.value(a)?, exp)
            }
            Expr::Seq(kind, a) => {
                let i = self.index(a)?;
                match kind {
                    SeqKind::F => self.lookup.fib(i),
                    SeqKind::L => self.lookup.lucas(i),
                    SeqKind::G => self.lookup.gen(&self.pt.seed, i),
                }
            }
            Expr::Binom(a, b) => binomial(self.index(a)?, self.index(b)?),
            Expr::Sign(a) => {
                if self.index(a)?.rem_euclid(2) == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                }
            }
            Expr::Pow5Floor(a) => {
                let half = self.index(a)?.div_euclid(2);
                if half < 0 {
                    return Err(EvalError::NegativeExponent { expr: print_expr(e), value: half });
                }
                let half = u32::try_from(half).map_err(|_| EvalError::ExponentTooLarge(half))?;
                Pow::pow(BigInt::from(5), half)
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.index(lo)?;
                let hi = self.index(hi)?;
                if lo > hi.saturating_add(1) {
                    return Err(EvalError::InvalidSumBounds { lo, hi });
                }
                let mut acc = BigInt::zero();
                for k in lo..=hi {
                    let inner = Evaluator {
                        pt: self.pt,
                        lookup: self.lookup,
                        bound: Some((var.as_str(), k)),
                    };
                    acc += inner.value(body)?;
                }
                acc
            }
        })
    }
}
