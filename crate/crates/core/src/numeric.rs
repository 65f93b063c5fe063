//! Multiprecision complex helpers shared by the numerical modules.

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Complex, Float, Integer, Rational};

use crate::exact_poly::{ExactPoly, Poly, QSqrt2};

/// Exact coefficient that can be rounded to a complex number.
pub trait ToComplex {
    fn to_complex(&self, prec: u32) -> Complex;
}

impl ToComplex for Integer {
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self)
    }
}

impl ToComplex for Rational {
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self)
    }
}

impl ToComplex for QSqrt2 {
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self.to_float(prec + 8))
    }
}

pub fn complex_coeffs<R: ToComplex + crate::exact_poly::Ring>(p: &Poly<R>, prec: u32) -> Vec<Complex> {
    p.coeffs().iter().map(|c| c.to_complex(prec)).collect()
}

/// Coefficients of an [`ExactPoly`] in the original variable.
pub fn exact_poly_complex(p: &ExactPoly, prec: u32) -> Vec<Complex> {
    complex_coeffs(&p.to_sqrt2_poly(), prec)
}

pub fn zero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// `|z|` rounded up to an `f64`, for cheap comparisons.
pub fn abs_f64(z: &Complex) -> f64 {
    abs(z).to_f64_round(Round::Up)
}

pub fn to_c64(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

/// Horner evaluation.
pub fn eval(coeffs: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = zero(prec);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// `(p(z), p'(z))` by a doubled Horner scheme.
pub fn eval_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let mut p = zero(prec);
    let mut dp = zero(prec);
    for c in coeffs.iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

/// Taylor coefficients of `p` at `a`, i.e. coefficients of `p(a + t)`.
pub fn taylor_shift(coeffs: &[Complex], a: &Complex) -> Vec<Complex> {
    let mut c: Vec<Complex> = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = (&c[j + 1] * a).complete(a.prec());
            c[j] += t;
        }
    }
    c
}

/// Truncated power-series quotient `num / den` to `len` terms; `den[0] ≠ 0`.
pub fn series_div(num: &[Complex], den: &[Complex], len: usize) -> Vec<Complex> {
    let prec = den[0].prec().0;
    let inv0 = Complex::with_val(prec, den[0].recip_ref());
    let mut out: Vec<Complex> = Vec::with_capacity(len);
    for k in 0..len {
        let mut s = num.get(k).cloned().unwrap_or_else(|| zero(prec));
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            s -= (&den[j] * &out[k - j]).complete((prec, prec));
        }
        out.push(s * &inv0);
    }
    out
}

/// Max of `|c_k|`, as an `f64` (used to set relative thresholds).
pub fn max_abs_f64(coeffs: &[Complex]) -> f64 {
    coeffs.iter().map(abs_f64).fold(0.0, f64::max)
}

/// Shortest round-trip decimal form of a complex number at full precision.
pub fn complex_to_string(z: &Complex) -> String {
    format!("{}{}{}i", z.real().to_string_radix(10, None), if z.imag().is_sign_negative() { "" } else { "+" }, z.imag().to_string_radix(10, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(128, (re, im))
    }

    #[test]
    fn taylor_shift_of_square() {
        // (a + t)² = a² + 2a t + t²
        let p = vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let s = taylor_shift(&p, &c(3.0, 1.0));
        assert_eq!(s[0], c(8.0, 6.0));
        assert_eq!(s[1], c(6.0, 2.0));
        assert_eq!(s[2], c(1.0, 0.0));
    }

    #[test]
    fn series_division_geometric() {
        // 1 / (1 − t) = 1 + t + t² + …
        let q = series_div(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(-1.0, 0.0)], 5);
        assert!(q.iter().all(|x| *x == c(1.0, 0.0)));
    }

    #[test]
    fn horner_with_derivative() {
        let p = vec![c(1.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)];
        let (v, d) = eval_with_derivative(&p, &c(2.0, 0.0));
        assert_eq!(v, c(11.0, 0.0));
        assert_eq!(d, c(21.0, 0.0));
        assert_eq!(eval(&p, &c(2.0, 0.0)), v);
    }
}
