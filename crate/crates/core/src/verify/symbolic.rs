use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use super::eval::binomial;
use super::report::{Failure, GridSummary, Mode, VerifyReport, REPORT_VERSION};
use super::VerifyError;
use crate::dsl::{print_expr, Expr, Identity, SeqKind};
use crate::zphi::{phi_pow, GoldenInt, GoldenRat, LaurentPoly3};

/// Exponents of the formal seed scalars `s+ = G(-1) + G(1)` and `s0 = G(0)`.
type SeedExp = [u32; 2];

/// A polynomial in the formal seed scalars with Laurent-polynomial
/// coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalValue {
    terms: BTreeMap<SeedExp, LaurentPoly3>,
}

impl FormalValue {
    pub fn zero() -> Self {
        FormalValue::default()
    }

    pub fn from_poly(p: LaurentPoly3) -> Self {
        FormalValue::seeded([0, 0], p)
    }

    fn seeded(exp: SeedExp, p: LaurentPoly3) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(exp, p);
        }
        FormalValue { terms }
    }

    pub fn constant(c: GoldenRat) -> Self {
        FormalValue::from_poly(LaurentPoly3::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: SeedExp, p: LaurentPoly3) {
        let sum = match self.terms.remove(&exp) {
            Some(old) => &old + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(exp, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, p) in &other.terms {
            out.add_term(*e, p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        FormalValue { terms: self.terms.iter().map(|(e, p)| (*e, -p)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = FormalValue::zero();
        for (ea, pa) in &self.terms {
            for (eb, pb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1]], pa * pb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(FormalValue::constant(GoldenRat::one()), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for FormalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            for (name, &e) in ["s+", "s0"].iter().zip(exp) {
                match e {
                    0 => {}
                    1 => write!(f, "{name}*")?,
                    _ => write!(f, "{name}^{e}*")?,
                }
            }
            write!(f, "({p})")?;
        }
        Ok(())
    }
}

/// `c + Σ coef[i] * slot_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Affine {
    c: i64,
    coef: [i64; 3],
}

impl Affine {
    fn constant(c: i64) -> Self {
        Affine { c, coef: [0; 3] }
    }

    fn as_constant(&self) -> Option<i64> {
        (self.coef == [0; 3]).then_some(self.c)
    }

    fn zip(self, o: Affine, f: impl Fn(i64, i64) -> Option<i64>) -> Option<Affine> {
        Some(Affine {
            c: f(self.c, o.c)?,
            coef: [f(self.coef[0], o.coef[0])?, f(self.coef[1], o.coef[1])?, f(self.coef[2], o.coef[2])?],
        })
    }

    fn scale(self, k: i64) -> Option<Affine> {
        self.zip(Affine::constant(0), |a, _| a.checked_mul(k))
    }
}

#[derive(Clone, Copy)]
struct Expander<'a> {
    slots: &'a [&'a str],
    fixed: &'a BTreeMap<String, i64>,
    parity: &'a [u8],
    bound: Option<(&'a str, i64)>,
    inv_sqrt5: &'a GoldenRat,
}

fn unsupported(e: &Expr, reason: &str) -> VerifyError {
    VerifyError::Unsupported { node: print_expr(e), reason: reason.to_string() }
}

impl<'a> Expander<'a> {
    fn affine(&self, e: &Expr) -> Result<Affine, VerifyError> {
        let overflow = || unsupported(e, "index arithmetic overflows");
        match e {
            Expr::Int(v) => Ok(Affine::constant(*v)),
            Expr::Sym(s) => {
                if let Some((var, k)) = self.bound {
                    if var == s {
                        return Ok(Affine::constant(k));
                    }
                }
                if let Some(v) = self.fixed.get(s) {
                    return Ok(Affine::constant(*v));
                }
                let slot = self
                    .slots
                    .iter()
                    .position(|p| p == s)
                    .ok_or_else(|| unsupported(e, "symbol has no value"))?;
                let mut coef = [0; 3];
                coef[slot] = 1;
                Ok(Affine { c: 0, coef })
            }
            Expr::Neg(a) => self.affine(a)?.scale(-1).ok_or_else(overflow),
            Expr::Add(a, b) => self.affine(a)?.zip(self.affine(b)?, i64::checked_add).ok_or_else(overflow),
            Expr::Sub(a, b) => self.affine(a)?.zip(self.affine(b)?, i64::checked_sub).ok_or_else(overflow),
            Expr::Mul(a, b) => {
                let (x, y) = (self.affine(a)?, self.affine(b)?);
                match (x.as_constant(), y.as_constant()) {
                    (Some(k), _) => y.scale(k).ok_or_else(overflow),
                    (_, Some(k)) => x.scale(k).ok_or_else(overflow),
                    _ => Err(VerifyError::NonAffine { node: print_expr(e) }),
                }
            }
            _ => Err(unsupported(e, "not an index expression")),
        }
    }

    fn constant(&self, e: &Expr, what: &str) -> Result<i64, VerifyError> {
        self.affine(e)?
            .as_constant()
            .ok_or_else(|| unsupported(e, &format!("{what} must not depend on the free parameters")))
    }

    fn parity_of(&self, a: &Affine) -> u8 {
        let mut p = a.c.rem_euclid(2);
        for (k, bit) in a.coef.iter().zip(self.parity) {
            p += k.rem_euclid(2) * i64::from(*bit);
        }
        (p % 2) as u8
    }

    /// `(φ^e, ψ^e)` as Laurent monomials, with `ψ^e = (-1)^e φ^-e`.
    fn binet_pair(&self, a: &Affine, e: &Expr) -> Result<(LaurentPoly3, LaurentPoly3), VerifyError> {
        let neg_c = a.c.checked_neg().ok_or_else(|| unsupported(e, "index overflows"))?;
        let phi = LaurentPoly3::monomial(a.coef, GoldenRat::from(phi_pow(a.c)));
        let mut psi_coeff = GoldenRat::from(phi_pow(neg_c));
        if self.parity_of(a) == 1 {
            psi_coeff = -psi_coeff;
        }
        let psi = LaurentPoly3::monomial([-a.coef[0], -a.coef[1], -a.coef[2]], psi_coeff);
        Ok((phi, psi))
    }

    fn fib(&self, a: &Affine, e: &Expr) -> Result<LaurentPoly3, VerifyError> {
        let (phi, psi) = self.binet_pair(a, e)?;
        Ok((&phi - &psi).scale(self.inv_sqrt5))
    }

    fn lucas(&self, a: &Affine, e: &Expr) -> Result<LaurentPoly3, VerifyError> {
        let (phi, psi) = self.binet_pair(a, e)?;
        Ok(&phi + &psi)
    }

    fn value(&self, e: &Expr) -> Result<FormalValue, VerifyError> {
        let half = GoldenRat::new(GoldenInt::one(), 2);
        Ok(match e {
            Expr::Int(v) => FormalValue::constant(GoldenRat::from_int(*v)),
            Expr::Sym(_) => {
                let v = self.constant(e, "a parameter used as a value")?;
                FormalValue::constant(GoldenRat::from_int(v))
            }
            Expr::Neg(a) => self.value(a)?.neg(),
            Expr::Add(a, b) => self.value(a)?.add(&self.value(b)?),
            Expr::Sub(a, b) => self.value(a)?.sub(&self.value(b)?),
            Expr::Mul(a, b) => self.value(a)?.mul(&self.value(b)?),
            Expr::Pow(a, b) => {
                let k = self.constant(b, "an exponent")?;
                let k = u32::try_from(k).map_err(|_| unsupported(e, "exponent is negative or too large"))?;
                self.value(a)?.pow(k)
            }
            Expr::Seq(kind, a) => {
                let aff = self.affine(a)?;
                match kind {
                    SeqKind::F => FormalValue::from_poly(self.fib(&aff, e)?),
                    SeqKind::L => FormalValue::from_poly(self.lucas(&aff, e)?),
                    // G = s+ F / 2 + s0 L / 2
                    SeqKind::G => {
                        let mut v = FormalValue::seeded([1, 0], self.fib(&aff, e)?.scale(&half));
                        v.add_term([0, 1], self.lucas(&aff, e)?.scale(&half));
                        v
                    }
                }
            }
            Expr::Binom(a, b) => {
                let n = self.constant(a, "a binomial argument")?;
                let k = self.constant(b, "a binomial argument")?;
                FormalValue::constant(GoldenRat::from_int(binomial(n, k)))
            }
            Expr::Sign(a) => {
                let s = if self.parity_of(&self.affine(a)?) == 0 { 1 } else { -1 };
                FormalValue::constant(GoldenRat::from_int(s))
            }
            Expr::Pow5Floor(a) => {
                let half_exp = self.constant(a, "a pow5floor argument")?.div_euclid(2);
                let k = u32::try_from(half_exp).map_err(|_| unsupported(e, "exponent is negative or too large"))?;
                FormalValue::constant(GoldenRat::from_int(num_traits::Pow::pow(num_bigint::BigInt::from(5), k)))
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.constant(lo, "a sum bound")?;
                let hi = self.constant(hi, "a sum bound")?;
                if lo > hi.saturating_add(1) {
                    return Err(unsupported(e, "sum bounds are inverted"));
                }
                let mut acc = FormalValue::zero();
                for k in lo..=hi {
                    let inner = Expander { bound: Some((var.as_str(), k)), ..*self };
                    acc = acc.add(&inner.value(body)?);
                }
                acc
            }
        })
    }
}

/// Proves `id` for all integer values of its non-rank parameters, with the
/// rank parameter (if any) fixed to `rank`.
///
/// Each non-rank parameter becomes a formal symbol (`X`, `Y`, `Z` in
/// declaration order) standing for `φ` raised to it; every parity class of the
/// parameters is one case. A report failure carries the case's parities as its
/// point and the nonzero residual `lhs - rhs` as its diff.
pub fn prove_symbolic(id: &Identity, rank: Option<i64>) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let mut fixed = BTreeMap::new();
    match (id.rank_param(), rank) {
        (Some(name), Some(n)) if n >= 0 => {
            fixed.insert(name.to_string(), n);
        }
        (Some(name), Some(n)) => {
            return Err(VerifyError::Grid(format!("rank `{name}` must be >= 0, got {n}")));
        }
        (Some(name), None) => {
            return Err(VerifyError::Grid(format!("`{}` needs a value for its rank `{name}`", id.name)));
        }
        (None, Some(_)) => {
            return Err(VerifyError::Grid(format!("`{}` has no rank parameter to fix", id.name)));
        }
        (None, None) => {}
    }
    let slots = id.shape_params();
    if slots.len() > 3 {
        return Err(VerifyError::Unsupported {
            node: id.text(),
            reason: format!("{} free parameters, at most 3 are supported", slots.len()),
        });
    }
    let inv_sqrt5 = GoldenRat::from(GoldenInt::sqrt5()).inv().expect("sqrt 5 is invertible");
    let cases = 1u64 << slots.len();
    let mut failures = Vec::new();
    for case in 0..cases {
        let parity: Vec<u8> = (0..slots.len()).map(|i| ((case >> (slots.len() - 1 - i)) & 1) as u8).collect();
        let ex = Expander { slots: &slots, fixed: &fixed, parity: &parity, bound: None, inv_sqrt5: &inv_sqrt5 };
        let lhs = ex.value(&id.lhs)?;
        let rhs = ex.value(&id.rhs)?;
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            let point = slots.iter().zip(&parity).map(|(s, b)| (s.to_string(), i64::from(*b))).collect();
            failures.push(Failure {
                point,
                seed: None,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                diff: diff.to_string(),
                note: Some("point gives parameter parities; diff is the nonzero residual".into()),
                order: (parity.iter().map(|&b| i64::from(b)).collect(), None),
            });
        }
    }
    Ok(VerifyReport {
        version: REPORT_VERSION,
        identity: id.name.clone(),
        paper_tag: id.paper_tag.clone(),
        mode: Mode::Symbolic,
        detail: None,
        grid: GridSummary { fixed, cases: Some(cases), ..GridSummary::default() },
        total: cases,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
