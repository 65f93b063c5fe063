//! Exact generalised Hermite and Okamoto polynomials.
//!
//! Both families are stored as monic integer polynomials in a scaled
//! variable: `h(w) = H_{m,n}(w/2)` and `q(w) = Q_{m,n}(w/√2)`. In those
//! variables the bilinear recursions have integer coefficients and every
//! division is an exact division by a monic polynomial.

mod families;
mod poly;
mod ring;

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use families::{expected_degree, gen_hermite, gen_okamoto, HermiteOrder, PolyTable, DEFAULT_HERMITE_CAP, DEFAULT_OKAMOTO_CAP};
pub use poly::Poly;
pub use ring::{CoeffRing, Field, QSqrt2, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial division is not exact")]
    DivisionNotExact,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero divisor in the {family} recursion at ({m}, {n})")]
    ZeroDivisorInRecursion { family: PolyFamily, m: i64, n: i64 },
    #[error("{family} polynomial ({m}, {n}) exceeds the configured cap")]
    CapExceeded { family: PolyFamily, m: i64, n: i64 },
    #[error("invalid indices ({m}, {n}) for {family}")]
    InvalidIndex { family: PolyFamily, m: i64, n: i64 },
    #[error("incompatible polynomial scales")]
    ScaleMismatch,
    #[error("malformed polynomial json: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyFamily {
    Hermite,
    Okamoto,
}

impl fmt::Display for PolyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyFamily::Hermite => write!(f, "hermite"),
            PolyFamily::Okamoto => write!(f, "okamoto"),
        }
    }
}

/// Which special polynomial an [`ExactPoly`] is, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolySource {
    pub family: PolyFamily,
    pub m: i64,
    pub n: i64,
}

/// Degree of `Q_{m,n}`: m² + n² + mn − m − n.
pub fn okamoto_degree(m: i64, n: i64) -> i64 {
    m * m + n * n + m * n - m - n
}

/// Exact polynomial in a scaled variable.
///
/// `coeffs` are the integer coefficients of `P(scale·w)`; the polynomial in
/// the original variable is recovered as `P(z) = coeffs(z / scale)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    pub source: Option<PolySource>,
    pub scale: QSqrt2,
    pub poly: Poly<Integer>,
}

impl ExactPoly {
    pub fn new(poly: Poly<Integer>, scale: QSqrt2) -> Self {
        Self { source: None, scale, poly }
    }

    /// An unscaled integer polynomial.
    pub fn integer(poly: Poly<Integer>) -> Self {
        Self::new(poly, QSqrt2::one())
    }

    pub fn from_i64s(vals: &[i64]) -> Self {
        Self::integer(Poly::from_i64s(vals))
    }

    pub fn with_source(mut self, family: PolyFamily, m: i64, n: i64) -> Self {
        self.source = Some(PolySource { family, m, n });
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The smallest ring containing the coefficients in the original variable.
    pub fn ring(&self) -> CoeffRing {
        let inv = self.inverse_scale();
        if !inv.b.cmp0().is_eq() {
            CoeffRing::RatSqrt2
        } else if inv.a.denom() == &1 {
            CoeffRing::Int
        } else {
            CoeffRing::Rat
        }
    }

    /// `1/scale`, the factor converting the stored variable to the original one.
    fn inverse_scale(&self) -> QSqrt2 {
        self.scale.inv().expect("nonzero scale")
    }

    /// Coefficients in the original variable over ℚ(√2).
    pub fn to_sqrt2_poly(&self) -> Poly<QSqrt2> {
        let inv = self.inverse_scale();
        self.poly.map(|c| QSqrt2::rational(c.clone())).compose_scale(&inv)
    }

    /// Coefficients in the original variable over ℚ. Fails when the scale
    /// involves √2.
    pub fn to_rational_poly(&self) -> Result<Poly<Rational>, PolyError> {
        if !self.scale.b.cmp0().is_eq() {
            return Err(PolyError::ScaleMismatch);
        }
        let inv = Rational::from(self.scale.a.recip_ref());
        Ok(self.poly.to_rational().compose_scale(&inv))
    }

    /// Coefficients in the original variable when they are integers.
    pub fn to_integer_poly(&self) -> Option<Poly<Integer>> {
        let q = self.to_rational_poly().ok()?;
        let ints: Option<Vec<Integer>> =
            q.coeffs().iter().map(|c| (c.denom() == &1).then(|| c.numer().clone())).collect();
        ints.map(Poly::new)
    }

    /// Rewrite with scale 1 when the original-variable coefficients are
    /// integers (always the case for Hermite polynomials).
    pub fn unscaled(&self) -> Option<ExactPoly> {
        self.to_integer_poly().map(|p| ExactPoly { source: self.source, scale: QSqrt2::one(), poly: p })
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson::from(self)
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == QSqrt2::one() {
            write!(f, "{}", self.poly)
        } else {
            write!(f, "[{}] at z/({})", self.poly, self.scale.inv().expect("nonzero scale"))
        }
    }
}

/// Exact quotient `a / b`. Both operands must share the same scale.
pub fn exact_divide(a: &ExactPoly, b: &ExactPoly) -> Result<ExactPoly, PolyError> {
    if a.scale != b.scale {
        return Err(PolyError::ScaleMismatch);
    }
    let q = a.poly.exact_div(&b.poly)?;
    Ok(ExactPoly::new(q, a.scale.clone()))
}

/// Gcd normalised to content 1 and positive leading coefficient.
pub fn poly_gcd(a: &ExactPoly, b: &ExactPoly) -> Result<ExactPoly, PolyError> {
    if a.scale != b.scale {
        return Err(PolyError::ScaleMismatch);
    }
    Ok(ExactPoly::new(a.poly.gcd(&b.poly), a.scale.clone()))
}

/// JSON form `{family, m, n, scale, coeffs}` with decimal-string coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub family: Option<PolyFamily>,
    pub m: Option<i64>,
    pub n: Option<i64>,
    pub scale: String,
    pub coeffs: Vec<String>,
}

impl From<&ExactPoly> for PolyJson {
    fn from(p: &ExactPoly) -> Self {
        Self {
            family: p.source.map(|s| s.family),
            m: p.source.map(|s| s.m),
            n: p.source.map(|s| s.n),
            scale: p.scale.to_string(),
            coeffs: p.poly.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl PolyJson {
    pub fn to_exact(&self) -> Result<ExactPoly, PolyError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| s.parse::<Integer>().map_err(|e| PolyError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let scale = parse_scale(&self.scale)?;
        let mut p = ExactPoly::new(Poly::new(coeffs), scale);
        if let (Some(family), Some(m), Some(n)) = (self.family, self.m, self.n) {
            p = p.with_source(family, m, n);
        }
        Ok(p)
    }
}

fn parse_scale(s: &str) -> Result<QSqrt2, PolyError> {
    let bad = || PolyError::Parse(format!("bad scale {s:?}"));
    let parse_rat = |t: &str| t.trim().parse::<Rational>().map_err(|_| bad());
    let sqrt_part = |t: &str| -> Result<Rational, PolyError> {
        let coef = t.strip_suffix("*sqrt(2)").ok_or_else(bad)?;
        parse_rat(coef)
    };
    if let Some((a, b)) = s.split_once('+') {
        Ok(QSqrt2::new(parse_rat(a)?, sqrt_part(b)?))
    } else if s.ends_with("*sqrt(2)") {
        Ok(QSqrt2::new(0, sqrt_part(s)?))
    } else {
        Ok(QSqrt2::rational(parse_rat(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_divide_examples() {
        let q = exact_divide(&ExactPoly::from_i64s(&[-1, 0, 1]), &ExactPoly::from_i64s(&[-1, 1])).unwrap();
        assert_eq!(q.poly, Poly::from_i64s(&[1, 1]));
        let q = exact_divide(&ExactPoly::from_i64s(&[0, 2]), &ExactPoly::from_i64s(&[2])).unwrap();
        assert_eq!(q.poly, Poly::from_i64s(&[0, 1]));
        assert_eq!(
            exact_divide(&ExactPoly::from_i64s(&[1, 0, 1]), &ExactPoly::from_i64s(&[-1, 1])),
            Err(PolyError::DivisionNotExact)
        );
    }

    #[test]
    fn gcd_of_powers() {
        let g = poly_gcd(&ExactPoly::from_i64s(&[0, 0, 1]), &ExactPoly::from_i64s(&[0, 0, 0, 1])).unwrap();
        assert_eq!(g.poly, Poly::from_i64s(&[0, 0, 1]));
    }

    #[test]
    fn scale_strings_round_trip() {
        for s in [QSqrt2::one(), QSqrt2::rational(Rational::from((1, 2))), QSqrt2::new(0, Rational::from((1, 2)))] {
            assert_eq!(parse_scale(&s.to_string()).unwrap(), s);
        }
        assert!(parse_scale("banana").is_err());
    }

    #[test]
    fn ring_tags() {
        let h = ExactPoly::new(Poly::from_i64s(&[0, 1]), QSqrt2::rational(Rational::from((1, 2))));
        assert_eq!(h.ring(), CoeffRing::Int);
        let q = ExactPoly::new(Poly::from_i64s(&[0, 1]), QSqrt2::new(0, Rational::from((1, 2))));
        assert_eq!(q.ring(), CoeffRing::RatSqrt2);
        assert_eq!(q.to_sqrt2_poly(), Poly::new(vec![QSqrt2::zero(), QSqrt2::sqrt2()]));
    }
}
