//! Brute-force reference evaluator.
//!
//! Sequence values come only from tables filled by the plain recurrence,
//! stepping outward from indices 0 and 1; binomials come from Pascal's
//! triangle. Nothing here calls the fast sequence code, the golden ring, or
//! the verification engine's evaluator: only the AST and point types are
//! shared, so a bug in either implementation shows up as a disagreement.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::dsl::{print_expr, Expr, SeqKind};
use crate::seq::Seed;
use crate::verify::ParamPoint;

/// Pascal rows past this are refused; the oracle is meant for small grids.
pub const MAX_PASCAL_ROW: i64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{kind}({index}) lies outside the table window {lo}..{hi}")]
    OutOfWindow { kind: &'static str, index: i64, lo: i64, hi: i64 },
    #[error("no table was built for seed {0}")]
    UnknownSeed(Seed),
    #[error("binom({n}, _) needs Pascal row {n}, table stops at {rows}")]
    BinomOutOfTable { n: i64, rows: i64 },
    #[error("symbol `{0}` has no value")]
    Unbound(String),
    #[error("exponent of `{0}` is negative")]
    NegativeExponent(String),
    #[error("index arithmetic overflows in `{0}`")]
    Overflow(String),
    #[error("sum bounds {lo}..{hi} are not a (possibly empty) range")]
    InvalidSumBounds { lo: i64, hi: i64 },
    #[error("Pascal row {0} exceeds the oracle limit")]
    TooLarge(i64),
}

/// Table window and seeds. `lo..=hi` must cover every sequence index the
/// checked expressions touch; `binom_rows` every binomial upper argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub lo: i64,
    pub hi: i64,
    pub seeds: Vec<Seed>,
    pub binom_rows: i64,
}

impl OracleConfig {
    /// The smallest config covering `exprs` over the given parameter ranges.
    pub fn covering(exprs: &[&Expr], ranges: &BTreeMap<String, (i64, i64)>, seeds: Vec<Seed>) -> OracleConfig {
        let mut seq: Option<Iv> = None;
        let mut binom: Option<Iv> = None;
        let env: BTreeMap<String, Iv> = ranges.iter().map(|(k, &(a, b))| (k.clone(), (a as i128, b as i128))).collect();
        for e in exprs {
            collect(e, &env, &mut seq, &mut binom);
        }
        let (lo, hi) = seq.map(clamp).unwrap_or((0, 1));
        OracleConfig {
            lo,
            hi,
            seeds,
            binom_rows: binom.map(|b| clamp(b).1.max(0)).unwrap_or(0),
        }
    }
}

type Iv = (i128, i128);

fn clamp(iv: Iv) -> (i64, i64) {
    let c = |v: i128| v.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
    (c(iv.0), c(iv.1))
}

fn join(acc: &mut Option<Iv>, iv: Iv) {
    *acc = Some(match *acc {
        None => iv,
        Some((a, b)) => (a.min(iv.0), b.max(iv.1)),
    });
}

fn interval(e: &Expr, env: &BTreeMap<String, Iv>) -> Option<Iv> {
    Some(match e {
        Expr::Int(v) => (*v as i128, *v as i128),
        Expr::Sym(s) => *env.get(s)?,
        Expr::Neg(a) => {
            let (lo, hi) = interval(a, env)?;
            (-hi, -lo)
        }
        Expr::Add(a, b) => {
            let (x, y) = (interval(a, env)?, interval(b, env)?);
            (x.0.saturating_add(y.0), x.1.saturating_add(y.1))
        }
        Expr::Sub(a, b) => {
            let (x, y) = (interval(a, env)?, interval(b, env)?);
            (x.0.saturating_sub(y.1), x.1.saturating_sub(y.0))
        }
        Expr::Mul(a, b) => {
            let (x, y) = (interval(a, env)?, interval(b, env)?);
            let c = [
                x.0.saturating_mul(y.0),
                x.0.saturating_mul(y.1),
                x.1.saturating_mul(y.0),
                x.1.saturating_mul(y.1),
            ];
            (*c.iter().min().unwrap(), *c.iter().max().unwrap())
        }
        _ => return None,
    })
}

fn collect(e: &Expr, env: &BTreeMap<String, Iv>, seq: &mut Option<Iv>, binom: &mut Option<Iv>) {
    match e {
        Expr::Seq(_, a) => {
            if let Some(iv) = interval(a, env) {
                join(seq, iv);
            }
        }
        Expr::Binom(n, _) => {
            if let Some(iv) = interval(n, env) {
                join(binom, iv);
            }
        }
        Expr::Sum { var, lo, hi, body } => {
            let (Some(l), Some(h)) = (interval(lo, env), interval(hi, env)) else {
                return;
            };
            // the body only runs for k in [min lo, max hi]
            if h.1 < l.0 {
                return;
            }
            let mut inner = env.clone();
            inner.insert(var.clone(), (l.0, h.1));
            collect(body, &inner, seq, binom);
        }
        other => {
            for c in other.children() {
                collect(c, env, seq, binom);
            }
        }
    }
}

/// Inclusive bounds on every sequence index `ast` can reach when each
/// parameter ranges over `ranges`; `None` if it reads no sequence.
pub fn index_range(ast: &Expr, ranges: &BTreeMap<String, (i64, i64)>) -> Option<(i64, i64)> {
    let env: BTreeMap<String, Iv> = ranges.iter().map(|(k, &(a, b))| (k.clone(), (a as i128, b as i128))).collect();
    let mut seq = None;
    let mut binom = None;
    collect(ast, &env, &mut seq, &mut binom);
    seq.map(clamp)
}

/// `values[i]` holds the term at index `lo + i`.
#[derive(Debug, Clone)]
struct NaiveTable {
    lo: i64,
    values: Vec<BigInt>,
}

impl NaiveTable {
    /// Walks the recurrence out from `x0 = t(0)` and `x1 = t(1)`.
    fn build(x0: BigInt, x1: BigInt, lo: i64, hi: i64) -> NaiveTable {
        let lo = lo.min(0);
        let hi = hi.max(1);
        let mut below = Vec::new();
        let (mut a, mut b) = (x0.clone(), x1.clone());
        // (a, b) = (t(i), t(i+1)) moving down
        for _ in lo..0 {
            let prev = &b - &a;
            b = a;
            a = prev;
            below.push(a.clone());
        }
        below.reverse();
        let mut values = below;
        values.push(x0.clone());
        values.push(x1.clone());
        let (mut a, mut b) = (x0, x1);
        for _ in 2..=hi {
            let next = &a + &b;
            a = b;
            b = next;
            values.push(b.clone());
        }
        NaiveTable { lo, values }
    }

    fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    fn get(&self, kind: &'static str, n: i64) -> Result<&BigInt, OracleError> {
        if n < self.lo || n > self.hi() {
            return Err(OracleError::OutOfWindow { kind, index: n, lo: self.lo, hi: self.hi() });
        }
        Ok(&self.values[(n - self.lo) as usize])
    }
}

/// Pascal's triangle, rows `0..=rows`.
fn pascal(rows: i64) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(rows as usize + 1);
    out.push(vec![BigInt::from(1)]);
    for n in 1..=rows as usize {
        let prev = &out[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        row.push(BigInt::from(1));
        for k in 1..n {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigInt::from(1));
        out.push(row);
    }
    out
}

#[derive(Debug, Clone)]
pub struct Oracle {
    fib: NaiveTable,
    lucas: NaiveTable,
    gens: Vec<(Seed, NaiveTable)>,
    pascal: Vec<Vec<BigInt>>,
}

impl Oracle {
    pub fn new(cfg: &OracleConfig) -> Result<Oracle, OracleError> {
        if cfg.binom_rows > MAX_PASCAL_ROW {
            return Err(OracleError::TooLarge(cfg.binom_rows));
        }
        let gens = cfg
            .seeds
            .iter()
            .map(|s| (s.clone(), NaiveTable::build(s.g0.clone(), s.g1.clone(), cfg.lo, cfg.hi)))
            .collect();
        Ok(Oracle {
            fib: NaiveTable::build(BigInt::from(0), BigInt::from(1), cfg.lo, cfg.hi),
            lucas: NaiveTable::build(BigInt::from(2), BigInt::from(1), cfg.lo, cfg.hi),
            gens,
            pascal: pascal(cfg.binom_rows.max(0)),
        })
    }

    pub fn fib(&self, n: i64) -> Result<BigInt, OracleError> {
        self.fib.get("F", n).cloned()
    }

    pub fn lucas(&self, n: i64) -> Result<BigInt, OracleError> {
        self.lucas.get("L", n).cloned()
    }

    pub fn gen(&self, seed: &Seed, n: i64) -> Result<BigInt, OracleError> {
        let (_, t) = self
            .gens
            .iter()
            .find(|(s, _)| s == seed)
            .ok_or_else(|| OracleError::UnknownSeed(seed.clone()))?;
        t.get("G", n).cloned()
    }

    pub fn binom(&self, n: i64, k: i64) -> Result<BigInt, OracleError> {
        if n < 0 || k < 0 || k > n {
            return Ok(BigInt::from(0));
        }
        let rows = self.pascal.len() as i64 - 1;
        if n > rows {
            return Err(OracleError::BinomOutOfTable { n, rows });
        }
        Ok(self.pascal[n as usize][k as usize].clone())
    }

    /// Value of `ast` at `pt`, by table lookup only.
    pub fn eval(&self, ast: &Expr, pt: &ParamPoint) -> Result<BigInt, OracleError> {
        let mut env: BTreeMap<&str, i64> = pt.values.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        self.value(ast, &mut env, &pt.seed)
    }

    fn index(&self, e: &Expr, env: &BTreeMap<&str, i64>) -> Result<i64, OracleError> {
        let ovf = || OracleError::Overflow(print_expr(e));
        match e {
            Expr::Int(v) => Ok(*v),
            Expr::Sym(s) => env.get(s.as_str()).copied().ok_or_else(|| OracleError::Unbound(s.clone())),
            Expr::Neg(a) => self.index(a, env)?.checked_neg().ok_or_else(ovf),
            Expr::Add(a, b) => self.index(a, env)?.checked_add(self.index(b, env)?).ok_or_else(ovf),
            Expr::Sub(a, b) => self.index(a, env)?.checked_sub(self.index(b, env)?).ok_or_else(ovf),
            Expr::Mul(a, b) => self.index(a, env)?.checked_mul(self.index(b, env)?).ok_or_else(ovf),
            _ => Err(OracleError::Overflow(format!("`{}` is not an index expression", print_expr(e)))),
        }
    }

    fn value<'e>(&self, e: &'e Expr, env: &mut BTreeMap<&'e str, i64>, seed: &Seed) -> Result<BigInt, OracleError> {
        Ok(match e {
            Expr::Int(v) => BigInt::from(*v),
            Expr::Sym(_) => BigInt::from(self.index(e, env)?),
            Expr::Neg(a) => -self.value(a, env, seed)?,
            Expr::Add(a, b) => self.value(a, env, seed)? + self.value(b, env, seed)?,
            Expr::Sub(a, b) => self.value(a, env, seed)? - self.value(b, env, seed)?,
            Expr::Mul(a, b) => self.value(a, env, seed)? * self.value(b, env, seed)?,
            Expr::Pow(a, b) => {
                let times = self.index(b, env)?;
                if times < 0 {
                    return Err(OracleError::NegativeExponent(print_expr(e)));
                }
                let base = self.value(a, env, seed)?;
                let mut acc = BigInt::from(1);
                for _ in 0..times {
                    acc *= &base;
                }
                acc
            }
            Expr::Seq(kind, a) => {
                let i = self.index(a, env)?;
                match kind {
                    SeqKind::F => self.fib(i)?,
                    SeqKind::L => self.lucas(i)?,
                    SeqKind::G => self.gen(seed, i)?,
                }
            }
            Expr::Binom(a, b) => self.binom(self.index(a, env)?, self.index(b, env)?)?,
            Expr::Sign(a) => {
                let v = self.index(a, env)?;
                BigInt::from(if v % 2 == 0 { 1 } else { -1 })
            }
            Expr::Pow5Floor(a) => {
                let v = self.index(a, env)?;
                // floor(v/2) for any sign of v
                let half = if v >= 0 { v / 2 } else { -((-v + 1) / 2) };
                if half < 0 {
                    return Err(OracleError::NegativeExponent(print_expr(e)));
                }
                let mut acc = BigInt::from(1);
                for _ in 0..half {
                    acc *= 5;
                }
                acc
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.index(lo, env)?;
                let hi = self.index(hi, env)?;
                if lo > hi.saturating_add(1) {
                    return Err(OracleError::InvalidSumBounds { lo, hi });
                }
                let saved = env.get(var.as_str()).copied();
                let mut acc = BigInt::from(0);
                let mut k = lo;
                while k <= hi {
                    env.insert(var.as_str(), k);
                    acc += self.value(body, env, seed)?;
                    k += 1;
                }
                match saved {
                    Some(v) => env.insert(var.as_str(), v),
                    None => env.remove(var.as_str()),
                };
                acc
            }
        })
    }
}

/// One-off oracle evaluation: builds tables just large enough for `pt`.
pub fn oracle_eval(ast: &Expr, pt: &ParamPoint) -> Result<BigInt, OracleError> {
    let ranges: BTreeMap<String, (i64, i64)> = pt.values.iter().map(|(k, &v)| (k.clone(), (v, v))).collect();
    let cfg = OracleConfig::covering(&[ast], &ranges, vec![pt.seed.clone()]);
    Oracle::new(&cfg)?.eval(ast, pt)
}
