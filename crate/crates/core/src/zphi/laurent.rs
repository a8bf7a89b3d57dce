use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::GoldenRat;

/// Exponents of the three formal invertible symbols `X`, `Y`, `Z`.
pub type Exponent = [i64; 3];

const SYMBOLS: [&str; 3] = ["X", "Y", "Z"];

/// Sparse Laurent polynomial in `X, Y, Z` over `Q(φ)`.
///
/// No stored coefficient is ever zero, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly3 {
    terms: BTreeMap<Exponent, GoldenRat>,
}

impl LaurentPoly3 {
    pub fn zero() -> Self {
        LaurentPoly3::default()
    }

    pub fn one() -> Self {
        LaurentPoly3::constant(GoldenRat::one())
    }

    pub fn constant(c: GoldenRat) -> Self {
        LaurentPoly3::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: Exponent, coeff: GoldenRat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly3 { terms }
    }

    /// The symbol `X`, `Y` or `Z` raised to `power` (which may be negative).
    pub fn var(index: usize, power: i64) -> Self {
        let mut exp = [0; 3];
        exp[index] = power;
        LaurentPoly3::monomial(exp, GoldenRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GoldenRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> Option<&GoldenRat> {
        self.terms.get(exp)
    }

    pub fn scale(&self, c: &GoldenRat) -> Self {
        if c.is_zero() {
            return LaurentPoly3::zero();
        }
        LaurentPoly3 {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(LaurentPoly3::one(), |acc, _| &acc * self)
    }

    fn accumulate(&mut self, exp: Exponent, coeff: GoldenRat) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                if !coeff.is_zero() {
                    v.insert(coeff);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl fmt::Display for LaurentPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{coeff}]")?;
            for (sym, &e) in SYMBOLS.iter().zip(exp) {
                match e {
                    0 => {}
                    1 => write!(f, "*{sym}")?,
                    _ => write!(f, "*{sym}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly3> for &LaurentPoly3 {
    type Output = LaurentPoly3;
    fn add(self, rhs: &'a LaurentPoly3) -> LaurentPoly3 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly3> for &LaurentPoly3 {
    type Output = LaurentPoly3;
    fn sub(self, rhs: &'a LaurentPoly3) -> LaurentPoly3 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly3> for &LaurentPoly3 {
    type Output = LaurentPoly3;
    fn mul(self, rhs: &'a LaurentPoly3) -> LaurentPoly3 {
        let mut out = LaurentPoly3::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.accumulate(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly3 {
    type Output = LaurentPoly3;
    fn neg(self) -> LaurentPoly3 {
        LaurentPoly3 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zphi::GoldenInt;
    use proptest::prelude::*;

    fn x() -> LaurentPoly3 {
        LaurentPoly3::var(0, 1)
    }

    fn y() -> LaurentPoly3 {
        LaurentPoly3::var(1, 1)
    }

    #[test]
    fn additive_inverse_is_empty() {
        let s = &x() + &y();
        let d = &s - &s;
        assert!(d.is_zero());
        assert_eq!(d, LaurentPoly3::zero());
    }

    #[test]
    fn invertible_symbol() {
        let prod = &x() * &LaurentPoly3::var(0, -1);
        assert_eq!(prod, LaurentPoly3::one());
    }

    #[test]
    fn square_with_sign_scalar() {
        // (X + σ X⁻¹)² = X² + 2σ + σ² X⁻², expanded by hand.
        for sigma in [1i64, -1] {
            let s = GoldenRat::from_int(sigma);
            let p = &x() + &LaurentPoly3::var(0, -1).scale(&s);
            let want = &(&LaurentPoly3::var(0, 2)
                + &LaurentPoly3::constant(GoldenRat::from_int(2 * sigma)))
                + &LaurentPoly3::var(0, -2).scale(&(&s * &s));
            assert_eq!(&p * &p, want);
            assert_eq!(p.pow(2), want);
        }
    }

    #[test]
    fn golden_coefficients_cancel() {
        // φ·X − (1 + φ)·X + X = 0 since the coefficients sum to zero.
        let phi = GoldenRat::from(GoldenInt::phi());
        let one_plus = GoldenRat::from(GoldenInt::new(1, 1));
        let p = &(&x().scale(&phi) - &x().scale(&one_plus)) + &x();
        assert!(p.is_zero());
    }

    #[test]
    fn display_is_ordered() {
        let p = &(&LaurentPoly3::var(2, -1) + &x()) + &LaurentPoly3::constant(GoldenRat::from_int(3));
        assert_eq!(p.to_string(), "[1]*Z^-1 + [3] + [1]*X");
    }

    fn poly() -> impl Strategy<Value = LaurentPoly3> {
        prop::collection::vec(((-2i64..3, -2i64..3, -2i64..3), -5i64..6, -5i64..6), 0..5).prop_map(
            |terms| {
                terms.into_iter().fold(LaurentPoly3::zero(), |acc, ((i, j, k), a, b)| {
                    &acc + &LaurentPoly3::monomial([i, j, k], GoldenRat::from(GoldenInt::new(a, b)))
                })
            },
        )
    }

    proptest! {
        #[test]
        fn canonical_form_has_no_zero_coefficients(p in poly(), q in poly()) {
            for r in [&p + &q, &p - &q, &p * &q] {
                prop_assert!(r.terms().all(|(_, c)| !c.is_zero()));
            }
        }

        #[test]
        fn ring_laws(p in poly(), q in poly(), r in poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&(&(&p + &q) - &q) - &p).is_zero());
        }
    }
}
