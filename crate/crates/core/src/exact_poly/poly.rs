//! Dense univariate polynomials over an exact ring.

use std::fmt;

use rug::{Integer, Rational};

use super::ring::{Field, Ring};
use super::PolyError;

/// Dense polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `c·x^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn from_i64s(vals: &[i64]) -> Self {
        Self::new(vals.iter().map(|&v| R::from_i64(v)).collect())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Ring::neg).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j].add_assign(&a.mul(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&R::from_i64(c))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_i64(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// The polynomial `p(c·x)`.
    pub fn compose_scale(&self, c: &R) -> Self {
        let mut pow = R::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.mul(&pow));
            pow = pow.mul(c);
        }
        Self::new(out)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let dlead = divisor.lead().ok_or(PolyError::DivisionByZero)?;
        let dlead_inv = dlead.inv().ok_or(PolyError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].mul(&dlead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                let t = c.mul(dj);
                rem[k - dd + j] = rem[k - dd + j].sub(&t);
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient when the division leaves no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::DivisionNotExact)
        }
    }

    pub fn make_monic(&self) -> Self {
        match self.lead().and_then(|l| l.inv()) {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.make_monic();
        }
        a.make_monic()
    }
}

impl Poly<Integer> {
    /// Greatest common divisor of the coefficients (nonnegative).
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_some_and(|l| l.cmp0().is_lt()) {
            g = -g;
        }
        Self { coeffs: self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect() }
    }

    /// Exact quotient over ℤ. Fails if the remainder is nonzero or any
    /// intermediate leading-coefficient division is inexact.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        let dlead = divisor.lead().ok_or(PolyError::DivisionByZero)?.clone();
        let dd = divisor.coeffs.len() - 1;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.coeffs.len() <= dd {
            return Err(PolyError::DivisionNotExact);
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::new(); rem.len() - dd];
        let unit_lead = dlead == 1;
        for k in (dd..rem.len()).rev() {
            if rem[k].cmp0().is_eq() {
                continue;
            }
            let c = if unit_lead {
                std::mem::take(&mut rem[k])
            } else {
                if !rem[k].is_divisible(&dlead) {
                    return Err(PolyError::DivisionNotExact);
                }
                Integer::from(rem[k].div_exact_ref(&dlead))
            };
            for (j, dj) in divisor.coeffs.iter().enumerate().take(dd) {
                if dj.cmp0().is_ne() {
                    rem[k - dd + j] -= &c * dj;
                }
            }
            rem[k] = Integer::new();
            quot[k - dd] = c;
        }
        if rem.iter().any(|c| c.cmp0().is_ne()) {
            return Err(PolyError::DivisionNotExact);
        }
        Ok(Self::new(quot))
    }

    /// Pseudo-remainder `lc(b)^(deg a − deg b + 1)·a mod b`, computed over ℤ.
    /// The multiplier is a positive power when it is even, so callers that
    /// care about signs should square the leading coefficient themselves.
    pub fn pseudo_rem(&self, divisor: &Self) -> Result<Self, PolyError> {
        let dlead = divisor.lead().ok_or(PolyError::DivisionByZero)?.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok(self.clone());
        }
        for k in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[k]);
            for r in rem.iter_mut().take(k) {
                *r *= &dlead;
            }
            if c.cmp0().is_ne() {
                for (j, dj) in divisor.coeffs.iter().enumerate().take(dd) {
                    rem[k - dd + j] -= &c * dj;
                }
            }
        }
        rem.truncate(dd);
        Ok(Self::new(rem))
    }

    /// Gcd over ℤ[x] by the primitive remainder sequence, normalised to
    /// content 1 with positive leading coefficient. A constant result (`1`)
    /// certifies coprimality over ℚ.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_part();
        }
        if a.is_constant() {
            return Self::one();
        }
        a
    }

    pub fn to_rational(&self) -> Poly<Rational> {
        self.map(|c| Rational::from(c))
    }

    /// Sign of the polynomial at `x` (−1, 0, 1), evaluated exactly.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        match acc.cmp0() {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::ring::QSqrt2;

    fn zp(v: &[i64]) -> Poly<Integer> {
        Poly::from_i64s(v)
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = zp(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(zp(&[0, 0]).is_zero());
        assert_eq!(zp(&[]).degree(), None);
    }

    #[test]
    fn integer_exact_division() {
        // (z² − 1)/(z − 1) = z + 1
        assert_eq!(zp(&[-1, 0, 1]).exact_div(&zp(&[-1, 1])).unwrap(), zp(&[1, 1]));
        // 2z / 2 = z
        assert_eq!(zp(&[0, 2]).exact_div(&zp(&[2])).unwrap(), zp(&[0, 1]));
        assert_eq!(zp(&[1, 0, 1]).exact_div(&zp(&[-1, 1])), Err(PolyError::DivisionNotExact));
        // z / 2 has no integer quotient
        assert_eq!(zp(&[0, 1]).exact_div(&zp(&[2])), Err(PolyError::DivisionNotExact));
        assert_eq!(zp(&[1]).exact_div(&zp(&[])), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn integer_gcd() {
        assert_eq!(zp(&[0, 0, 1]).gcd(&zp(&[0, 0, 0, 1])), zp(&[0, 0, 1]));
        // gcd((z−1)(z+2), (z−1)(z−3)) = z − 1
        let a = zp(&[-1, 1]).mul(&zp(&[2, 1]));
        let b = zp(&[-1, 1]).mul(&zp(&[-3, 1]));
        assert_eq!(a.gcd(&b), zp(&[-1, 1]));
        assert_eq!(zp(&[2, 4]).gcd(&zp(&[6])), zp(&[1]));
        assert_eq!(zp(&[1, 1]).gcd(&zp(&[1, -1])), zp(&[1]));
        // content removed, leading sign normalised
        assert_eq!(zp(&[2, -2]).gcd(&zp(&[0])), zp(&[-1, 1]));
    }

    #[test]
    fn field_division_and_gcd() {
        let a: Poly<Rational> = Poly::from_i64s(&[-1, 0, 1]);
        let b: Poly<Rational> = Poly::from_i64s(&[-2, 2]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, Poly::new(vec![Rational::from((1, 2)), Rational::from((1, 2))]));
        assert_eq!(a.gcd(&b), Poly::from_i64s(&[-1, 1]));
    }

    #[test]
    fn sqrt2_polynomials() {
        // (z − √2)(z + √2) = z² − 2
        let r2 = QSqrt2::sqrt2();
        let a = Poly::new(vec![r2.neg(), QSqrt2::one()]);
        let b = Poly::new(vec![r2, QSqrt2::one()]);
        assert_eq!(a.mul(&b), Poly::from_i64s(&[-2, 0, 1]));
        assert_eq!(a.mul(&b).exact_div(&a).unwrap(), b);
    }

    #[test]
    fn derivative_and_eval() {
        let p = zp(&[1, -3, 0, 2]);
        assert_eq!(p.derivative(), zp(&[-3, 0, 6]));
        assert_eq!(p.eval(&Integer::from(2)), Integer::from(11));
        assert_eq!(p.compose_scale(&Integer::from(2)), zp(&[1, -6, 0, 16]));
    }

    #[test]
    fn pseudo_remainder_matches_field_remainder() {
        let a = zp(&[3, 1, 4, 1, 5]);
        let b = zp(&[2, 7, 3]);
        let pr = a.pseudo_rem(&b).unwrap();
        let (_, r) = a.to_rational().div_rem(&b.to_rational()).unwrap();
        // lc(b)^(4−2+1) = 27
        assert_eq!(pr.to_rational(), r.scale(&Rational::from(27)));
    }
}
