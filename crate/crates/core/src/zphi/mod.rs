//! Exact arithmetic in the golden-ratio ring `Z[φ]` and its fraction field.
//!
//! Elements are stored in the φ-basis as `a + bφ` with `φ² = φ + 1`. The
//! conjugate sends `φ ↦ 1 - φ`, so `(1 - φ)^n` is simply `conj(φ^n)` and the
//! Binet formulas can be evaluated with no rounding at all.

mod laurent;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use laurent::{Exponent, LaurentPoly3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoldenError {
    #[error("internal fault: Binet value {0} is not a rational integer")]
    NotInteger(GoldenRat),
}

/// `a + bφ` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl GoldenInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        GoldenInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        GoldenInt::new(a, 0)
    }

    pub fn zero() -> Self {
        GoldenInt::new(0, 0)
    }

    pub fn one() -> Self {
        GoldenInt::new(1, 0)
    }

    pub fn phi() -> Self {
        GoldenInt::new(0, 1)
    }

    /// `√5 = 2φ - 1`.
    pub fn sqrt5() -> Self {
        GoldenInt::new(-1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `(a + b) - bφ`, the image under `φ ↦ 1 - φ`.
    pub fn conj(&self) -> Self {
        GoldenInt {
            a: &self.a + &self.b,
            b: -&self.b,
        }
    }

    /// `x · conj(x) = a² + ab - b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GoldenInt::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn scale(&self, k: &BigInt) -> Self {
        GoldenInt {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    fn content(&self) -> BigInt {
        self.a.gcd(&self.b)
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b_term = |f: &mut fmt::Formatter<'_>, b: &BigInt| {
            if b.is_one() {
                write!(f, "φ")
            } else {
                write!(f, "{b}φ")
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => {
                if self.b.is_negative() {
                    write!(f, "-")?;
                }
                b_term(f, &self.b.abs())
            }
            (false, false) => {
                write!(f, "{}", self.a)?;
                write!(f, " {} ", if self.b.is_negative() { "-" } else { "+" })?;
                b_term(f, &self.b.abs())
            }
        }
    }
}

impl<'a> Add<&'a GoldenInt> for &GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: &'a GoldenInt) -> GoldenInt {
        GoldenInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a GoldenInt> for &GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: &'a GoldenInt) -> GoldenInt {
        GoldenInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a GoldenInt> for &GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: &'a GoldenInt) -> GoldenInt {
        // (a + bφ)(c + dφ) = (ac + bd) + (ad + bc + bd)φ
        let bd = &self.b * &rhs.b;
        GoldenInt {
            a: &self.a * &rhs.a + &bd,
            b: &self.a * &rhs.b + &self.b * &rhs.a + bd,
        }
    }
}

impl Neg for &GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                $tr::$m(&self, &rhs)
            }
        }
    )*};
}

forward_owned!(GoldenInt, Add::add, Sub::sub, Mul::mul);

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        -&self
    }
}

/// An element `num / den` of `Q(φ)`, kept with `den > 0` and
/// `gcd(num.a, num.b, den) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenRat {
    num: GoldenInt,
    den: BigInt,
}

impl GoldenRat {
    /// Panics if `den` is zero.
    pub fn new(num: GoldenInt, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "GoldenRat with zero denominator");
        let mut r = GoldenRat { num, den };
        r.normalize();
        r
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        GoldenRat::from(GoldenInt::from_int(v))
    }

    pub fn zero() -> Self {
        GoldenRat::from(GoldenInt::zero())
    }

    pub fn one() -> Self {
        GoldenRat::from(GoldenInt::one())
    }

    pub fn num(&self) -> &GoldenInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.a.is_one() && self.num.b.is_zero()
    }

    /// The value as a rational integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.den.is_one() && self.num.b.is_zero()).then(|| self.num.a.clone())
    }

    pub fn conj(&self) -> Self {
        GoldenRat {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    /// `1 / x = conj(x) / norm(x)`. Returns `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.num.norm();
        Some(GoldenRat::new(self.num.conj().scale(&self.den), norm))
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = -&self.num;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let g = self.num.content().gcd(&self.den);
        if !g.is_one() {
            self.num.a /= &g;
            self.num.b /= &g;
            self.den /= &g;
        }
    }
}

impl From<GoldenInt> for GoldenRat {
    fn from(num: GoldenInt) -> Self {
        GoldenRat {
            num,
            den: BigInt::one(),
        }
    }
}

impl fmt::Display for GoldenRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compound = !self.num.a.is_zero() && !self.num.b.is_zero();
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if compound {
            write!(f, "({})/{}", self.num, self.den)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a GoldenRat> for &GoldenRat {
    type Output = GoldenRat;
    fn add(self, rhs: &'a GoldenRat) -> GoldenRat {
        if self.den == rhs.den {
            return GoldenRat::new(&self.num + &rhs.num, self.den.clone());
        }
        GoldenRat::new(
            &self.num.scale(&rhs.den) + &rhs.num.scale(&self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a GoldenRat> for &GoldenRat {
    type Output = GoldenRat;
    fn sub(self, rhs: &'a GoldenRat) -> GoldenRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a GoldenRat> for &GoldenRat {
    type Output = GoldenRat;
    fn mul(self, rhs: &'a GoldenRat) -> GoldenRat {
        GoldenRat::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a GoldenRat> for &GoldenRat {
    type Output = GoldenRat;
    /// Panics on division by zero.
    fn div(self, rhs: &'a GoldenRat) -> GoldenRat {
        let inv = rhs.inv().expect("division by zero in Q(φ)");
        self * &inv
    }
}

impl Neg for &GoldenRat {
    type Output = GoldenRat;
    fn neg(self) -> GoldenRat {
        GoldenRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(GoldenRat, Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for GoldenRat {
    type Output = GoldenRat;
    fn neg(self) -> GoldenRat {
        -&self
    }
}

/// `φ^n` for any integer `n`. φ is a unit (`φ⁻¹ = φ - 1`), so negative powers
/// stay inside `Z[φ]`.
pub fn phi_pow(n: i64) -> GoldenInt {
    let base = if n >= 0 {
        GoldenInt::phi()
    } else {
        GoldenInt::new(-1, 1)
    };
    base.pow(n.unsigned_abs())
}

/// `(φ^n - (1-φ)^n) / √5`, checked to be a rational integer.
pub fn binet_fib(n: i64) -> Result<BigInt, GoldenError> {
    let p = phi_pow(n);
    let diff = GoldenRat::from(&p - &p.conj());
    let value = &diff / &GoldenRat::from(GoldenInt::sqrt5());
    value.to_integer().ok_or(GoldenError::NotInteger(value))
}

/// `φ^n + (1-φ)^n`, checked to be a rational integer.
pub fn binet_lucas(n: i64) -> Result<BigInt, GoldenError> {
    let p = phi_pow(n);
    let value = GoldenRat::from(&p + &p.conj());
    value.to_integer().ok_or(GoldenError::NotInteger(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq;
    use proptest::prelude::*;

    fn gi(a: i64, b: i64) -> GoldenInt {
        GoldenInt::new(a, b)
    }

    #[test]
    fn phi_pow_examples() {
        assert_eq!(phi_pow(0), gi(1, 0));
        assert_eq!(phi_pow(5), gi(3, 5));
        assert_eq!(phi_pow(-1), gi(-1, 1));
        assert_eq!(&phi_pow(-1) * &GoldenInt::phi(), GoldenInt::one());
    }

    #[test]
    fn phi_times_conjugate_is_minus_one() {
        let phi = GoldenInt::phi();
        assert_eq!(&phi * &phi.conj(), gi(-1, 0));
        assert_eq!(phi.conj(), gi(1, -1));
    }

    #[test]
    fn sqrt5_squares_to_five() {
        let s = GoldenInt::sqrt5();
        assert_eq!(&s * &s, gi(5, 0));
        let inv = GoldenRat::from(s).inv().unwrap();
        assert_eq!(inv, GoldenRat::new(gi(-1, 2), 5));
    }

    #[test]
    fn binet_examples() {
        assert_eq!(binet_fib(1).unwrap(), BigInt::from(1));
        assert_eq!(binet_fib(12).unwrap(), BigInt::from(144));
        assert_eq!(binet_fib(-6).unwrap(), BigInt::from(-8));
        assert_eq!(binet_lucas(0).unwrap(), BigInt::from(2));
        assert_eq!(binet_lucas(7).unwrap(), BigInt::from(29));
        assert_eq!(binet_lucas(-3).unwrap(), BigInt::from(-4));
    }

    #[test]
    fn binet_agrees_with_sequences() {
        for n in -200..=200 {
            assert_eq!(binet_fib(n).unwrap(), seq::fib(n), "F({n})");
            assert_eq!(binet_lucas(n).unwrap(), seq::lucas(n), "L({n})");
        }
    }

    #[test]
    fn phi_pow_coefficient_law() {
        for n in -200..=200 {
            let p = phi_pow(n);
            assert_eq!(p, GoldenInt { a: seq::fib(n - 1), b: seq::fib(n) });
            assert_eq!(&p.a * 2 + &p.b, seq::lucas(n));
        }
    }

    #[test]
    fn rational_reduction() {
        let r = GoldenRat::new(gi(4, -6), -8);
        assert_eq!(r.num(), &gi(-2, 3));
        assert_eq!(r.den(), &BigInt::from(4));
        assert_eq!(GoldenRat::new(gi(0, 0), 7).den(), &BigInt::from(1));
        assert_eq!(r.to_string(), "(-2 + 3φ)/4");
    }

    #[test]
    fn display() {
        assert_eq!(gi(3, 5).to_string(), "3 + 5φ");
        assert_eq!(gi(-1, 1).to_string(), "-1 + φ");
        assert_eq!(gi(0, -2).to_string(), "-2φ");
        assert_eq!(gi(7, 0).to_string(), "7");
    }

    fn small() -> impl Strategy<Value = GoldenInt> {
        (-1000i64..1000, -1000i64..1000).prop_map(|(a, b)| gi(a, b))
    }

    proptest! {
        #[test]
        fn ring_laws(x in small(), y in small(), z in small()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn conjugation_is_a_homomorphism(x in small(), y in small()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        }

        #[test]
        fn norm_is_product_with_conjugate(x in small()) {
            let n = x.norm();
            prop_assert_eq!(&x * &x.conj(), GoldenInt { a: n, b: BigInt::zero() });
        }

        #[test]
        fn field_inverse(x in small(), d in 1i64..50) {
            let r = GoldenRat::new(x, d);
            if let Some(inv) = r.inv() {
                prop_assert!((&r * &inv).is_one());
            } else {
                prop_assert!(r.is_zero());
            }
        }
    }
}
