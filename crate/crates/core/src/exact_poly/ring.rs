//! Exact coefficient rings: integers, rationals and rationals adjoined √2.

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

/// Tag for the coefficient ring of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoeffRing {
    Int,
    Rat,
    RatSqrt2,
}

/// A commutative ring with exact arithmetic.
///
/// Methods take references so that big-number types do not need to be
/// cloned at every call site.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const RING: CoeffRing;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn add_assign(&mut self, other: &Self) {
        *self = Ring::add(self, other);
    }

    fn mul_i64(&self, v: i64) -> Self {
        self.mul(&Self::from_i64(v))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Ring for Integer {
    const RING: CoeffRing = CoeffRing::Int;

    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn from_i64(v: i64) -> Self {
        Integer::from(v)
    }
    fn add(&self, other: &Self) -> Self {
        Integer::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Integer::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Integer::from(self * other)
    }
    fn neg(&self) -> Self {
        Integer::from(-self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

impl Ring for Rational {
    const RING: CoeffRing = CoeffRing::Rat;

    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// An element `a + b·√2` of ℚ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>) -> Self {
        Self { a: a.into(), b: b.into() }
    }

    pub fn rational(a: impl Into<Rational>) -> Self {
        Self { a: a.into(), b: Rational::new() }
    }

    pub fn sqrt2() -> Self {
        Self::new(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: Rational::from(-&self.b) }
    }

    /// Field norm a² − 2b².
    pub fn norm(&self) -> Rational {
        let a2 = Rational::from(self.a.square_ref());
        let b2 = Rational::from(self.b.square_ref());
        a2 - b2 * 2u32
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * std::f64::consts::SQRT_2
    }

    /// Value as a multiprecision float.
    pub fn to_float(&self, prec: u32) -> rug::Float {
        let sqrt2 = rug::Float::with_val(prec, 2).sqrt();
        rug::Float::with_val(prec, &self.a) + sqrt2 * rug::Float::with_val(prec, &self.b)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a_zero = self.a.cmp0().is_eq();
        let b_zero = self.b.cmp0().is_eq();
        match (a_zero, b_zero) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt(2)", self.b),
            (false, false) => write!(f, "{}+{}*sqrt(2)", self.a, self.b),
        }
    }
}

impl Ring for QSqrt2 {
    const RING: CoeffRing = CoeffRing::RatSqrt2;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::rational(1)
    }
    fn is_zero(&self) -> bool {
        self.a.cmp0().is_eq() && self.b.cmp0().is_eq()
    }
    fn from_i64(v: i64) -> Self {
        Self::rational(v)
    }
    fn add(&self, other: &Self) -> Self {
        Self {
            a: Rational::from(&self.a + &other.a),
            b: Rational::from(&self.b + &other.b),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        Self {
            a: Rational::from(&self.a - &other.a),
            b: Rational::from(&self.b - &other.b),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let ac = Rational::from(&self.a * &other.a);
        let bd = Rational::from(&self.b * &other.b);
        let ad = Rational::from(&self.a * &other.b);
        let bc = Rational::from(&self.b * &other.a);
        Self { a: ac + bd * 2u32, b: ad + bc }
    }
    fn neg(&self) -> Self {
        Self { a: Rational::from(-&self.a), b: Rational::from(-&self.b) }
    }
    fn add_assign(&mut self, other: &Self) {
        self.a += &other.a;
        self.b += &other.b;
    }
}

impl Field for QSqrt2 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        // 1/(a + b√2) = (a − b√2)/(a² − 2b²); the norm is nonzero since √2 ∉ ℚ.
        let n = self.norm();
        let c = self.conj();
        Some(Self { a: c.a / &n, b: c.b / n })
    }
    fn from_rational(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
}

impl From<Integer> for QSqrt2 {
    fn from(v: Integer) -> Self {
        Self::rational(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QSqrt2::sqrt2();
        assert_eq!(s.mul(&s), QSqrt2::rational(2));
    }

    #[test]
    fn inverse_round_trips() {
        let x = QSqrt2::new(Rational::from((3, 7)), Rational::from((-5, 2)));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), QSqrt2::one());
        assert!(QSqrt2::zero().inv().is_none());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = QSqrt2::new(1, 1);
        let mut acc = QSqrt2::one();
        for e in 0..7 {
            assert_eq!(x.pow(e), acc);
            acc = acc.mul(&x);
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(QSqrt2::rational(3).to_string(), "3");
        assert_eq!(QSqrt2::new(0, Rational::from((1, 2))).to_string(), "1/2*sqrt(2)");
        assert_eq!(QSqrt2::new(1, -2).to_string(), "1+-2*sqrt(2)");
    }
}
