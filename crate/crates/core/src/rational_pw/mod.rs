//! Rational solutions of P_IV built from generalised Hermite and Okamoto
//! polynomials, their exact verification, Bäcklund transformations and
//! local (Laurent) data at zeros and poles.
//!
//! P_IV with parameters θ = (θ₀, θ∞):
//!
//! ```text
//! ω'' = ω'²/(2ω) + 3ω³/2 + 4zω² + 2(z² + 1 − 2θ∞)ω − 8θ₀²/ω
//! ```

mod backlund;
mod laurent;
mod ratfunc;

use std::fmt;
use std::sync::Arc;

use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_poly::{gen_hermite, gen_okamoto, ExactPoly, Field, Poly, PolyError, PolyFamily, PolyJson, PolySource, QSqrt2};

pub use backlund::{apply_backlund, backlund, backlund_raw, backlund_target, backlund_theta};
pub use laurent::{laurent_at, LaurentData, SingularityKind};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RationalError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("ω is identically zero")]
    OmegaIdenticallyZero,
    #[error("R{transform} is degenerate on {family}({m}, {n}): {reason}")]
    DegenerateTransform { transform: u8, family: Family, m: i64, n: i64, reason: String },
    #[error("R{transform} applied to {family}({m}, {n}) does not reproduce the tabulated target")]
    TransformMismatch { transform: u8, family: Family, m: i64, n: i64 },
    #[error("Bäcklund index must be 1..=4, got {0}")]
    InvalidTransform(u8),
    #[error("invalid indices ({m}, {n}) for {family}")]
    InvalidIndex { family: Family, m: i64, n: i64 },
    #[error("centre is known only to radius {radius:e}; need at most {needed:e}")]
    PrecisionInsufficient { radius: f64, needed: f64 },
    #[error("Laurent data inconsistent at the centre: {0}")]
    LaurentMismatch(String),
}

/// The four families of rational solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "HI")]
    HermiteI,
    #[serde(rename = "HII")]
    HermiteII,
    #[serde(rename = "HIII")]
    HermiteIII,
    #[serde(rename = "OK")]
    Okamoto,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::HermiteI, Family::HermiteII, Family::HermiteIII, Family::Okamoto];

    pub fn is_hermite(self) -> bool {
        self != Family::Okamoto
    }

    pub fn valid_indices(self, m: i64, n: i64) -> bool {
        !self.is_hermite() || (m >= 0 && n >= 0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::HermiteI => "HI",
            Family::HermiteII => "HII",
            Family::HermiteIII => "HIII",
            Family::Okamoto => "OK",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "HI" | "I" => Ok(Family::HermiteI),
            "HII" | "II" => Ok(Family::HermiteII),
            "HIII" | "III" => Ok(Family::HermiteIII),
            "OK" | "OKAMOTO" => Ok(Family::Okamoto),
            _ => Err(format!("unknown family {s:?} (expected HI, HII, HIII or OK)")),
        }
    }
}

/// Parameters θ = (θ₀, θ∞). Both are rational for every family here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Theta {
    pub theta0: Rational,
    pub theta_inf: Rational,
}

impl Theta {
    pub fn new(theta0: impl Into<Rational>, theta_inf: impl Into<Rational>) -> Self {
        Self { theta0: theta0.into(), theta_inf: theta_inf.into() }
    }

    /// θ∞ ∈ ½ℤ and θ₀ − θ∞ ∈ ℤ.
    pub fn is_hermite_type(&self) -> bool {
        let diff = Rational::from(&self.theta0 - &self.theta_inf);
        half_integer(&self.theta_inf) && diff.denom() == &1
    }

    /// θ∞ ∈ ½ℤ and θ₀ − θ∞ ∈ ℤ ± ⅔.
    pub fn is_okamoto_type(&self) -> bool {
        let diff = Rational::from(&self.theta0 - &self.theta_inf);
        let shifted_up = &diff + Rational::from((2, 3));
        let shifted_down = &diff - Rational::from((2, 3));
        half_integer(&self.theta_inf) && (shifted_up.denom() == &1 || shifted_down.denom() == &1)
    }
}

fn half_integer(x: &Rational) -> bool {
    Rational::from(x * 2u32).denom() == &1
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.theta0, self.theta_inf)
    }
}

/// `ω = drift·z + num'/num − den'/den` together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSolution {
    pub family: Family,
    pub m: i64,
    pub n: i64,
    pub theta: Theta,
    pub drift: Rational,
    pub num: Arc<ExactPoly>,
    pub den: Arc<ExactPoly>,
}

fn hermite(m: i64, n: i64) -> Result<Arc<ExactPoly>, PolyError> {
    gen_hermite(m, n)
}

fn r(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

/// The member `(family, m, n)` of a family of rational solutions.
pub fn build_rational(family: Family, m: i64, n: i64) -> Result<RationalSolution, RationalError> {
    if !family.valid_indices(m, n) {
        return Err(RationalError::InvalidIndex { family, m, n });
    }
    let (num, den, drift, theta) = match family {
        Family::HermiteI => (hermite(m + 1, n)?, hermite(m, n)?, Rational::new(), Theta::new(r(n, 2), r(2 * m + n + 2, 2))),
        Family::HermiteII => (hermite(m, n)?, hermite(m, n + 1)?, Rational::new(), Theta::new(r(m, 2), r(-m - 2 * n, 2))),
        Family::HermiteIII => (
            hermite(m, n + 1)?,
            hermite(m + 1, n)?,
            Rational::from(-2),
            Theta::new(r(m + n + 1, 2), r(n - m + 1, 2)),
        ),
        Family::Okamoto => (
            gen_okamoto(m + 1, n)?,
            gen_okamoto(m, n)?,
            r(-2, 3),
            Theta::new(r(3 * n - 1, 6), r(2 * m + n + 1, 2)),
        ),
    };
    Ok(RationalSolution { family, m, n, theta, drift, num, den })
}

impl RationalSolution {
    /// ω as a rational function over ℚ(√2) (exact for every family).
    pub fn omega_sqrt2(&self) -> RatFunc<QSqrt2> {
        omega_from(
            &self.num.to_sqrt2_poly(),
            &self.den.to_sqrt2_poly(),
            &QSqrt2::rational(self.drift.clone()),
        )
    }

    /// ω over ℚ, available for the Hermite families.
    pub fn omega_rational(&self) -> Option<RatFunc<Rational>> {
        let num = self.num.to_rational_poly().ok()?;
        let den = self.den.to_rational_poly().ok()?;
        Some(omega_from(&num, &den, &self.drift.clone()))
    }

    pub fn to_json(&self) -> RationalSolutionJson {
        RationalSolutionJson {
            family: self.family,
            m: self.m,
            n: self.n,
            theta0: self.theta.theta0.to_string(),
            theta_inf: self.theta.theta_inf.to_string(),
            drift: self.drift.to_string(),
            num: self.num.to_json(),
            den: self.den.to_json(),
        }
    }
}

/// Serialised form of a [`RationalSolution`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RationalSolutionJson {
    pub family: Family,
    pub m: i64,
    pub n: i64,
    pub theta0: String,
    pub theta_inf: String,
    pub drift: String,
    pub num: PolyJson,
    pub den: PolyJson,
}

/// `drift·z + N'/N − D'/D = (drift·z·N·D + N'·D − N·D') / (N·D)`.
fn omega_from<F: Field>(num: &Poly<F>, den: &Poly<F>, drift: &F) -> RatFunc<F> {
    let nd = num.mul(den);
    let top = Poly::<F>::x()
        .scale(drift)
        .mul(&nd)
        .add(&num.derivative().mul(den))
        .sub(&num.mul(&den.derivative()));
    RatFunc::from_parts(top, nd)
}

/// Numerator of `2ω·B⁴·(ω'' − RHS)` for `ω = A/B`:
///
/// ```text
/// 2A[(A''B − AB'')B − 2B'W] − W² − 3A⁴ − 8zA³B − 4(z² + 1 − 2θ∞)A²B² + 16θ₀²B⁴,
/// W = A'B − AB'.
/// ```
///
/// It vanishes identically iff ω solves P_IV(θ).
pub fn piv_residual_of<F: Field>(omega: &RatFunc<F>, theta: &Theta) -> Result<Poly<F>, RationalError> {
    let (a, b) = (&omega.num, &omega.den);
    if a.is_zero() {
        return Err(RationalError::OmegaIdenticallyZero);
    }
    let (a1, b1) = (a.derivative(), b.derivative());
    let (a2, b2) = (a1.derivative(), b1.derivative());
    let w = a1.mul(b).sub(&a.mul(&b1));
    let w1 = a2.mul(b).sub(&a.mul(&b2));
    let z = Poly::<F>::x();
    let a_sq = a.square();
    let b_sq = b.square();
    let lhs = a.mul(&w1.mul(b).sub(&b1.mul(&w).scale_i64(2))).scale_i64(2);
    let two_theta_inf = F::from_rational(&Rational::from(&theta.theta_inf * 2u32));
    let quad = z.square().add(&Poly::constant(F::one().sub(&two_theta_inf))).scale_i64(4);
    let theta0_sq = F::from_rational(&Rational::from(theta.theta0.square_ref()));
    let res = lhs
        .sub(&w.square())
        .sub(&a_sq.square().scale_i64(3))
        .sub(&z.mul(&a_sq.mul(a)).mul(b).scale_i64(8))
        .sub(&quad.mul(&a_sq).mul(&b_sq))
        .add(&b_sq.square().scale(&theta0_sq.mul_i64(16)));
    Ok(res)
}

/// Residual of a member of a family, returned over ℚ(√2). Hermite members
/// are computed over ℚ and embedded.
pub fn piv_residual(sol: &RationalSolution) -> Result<Poly<QSqrt2>, RationalError> {
    match sol.omega_rational() {
        Some(omega) => Ok(piv_residual_of(&omega, &sol.theta)?.map(|c| QSqrt2::rational(c.clone()))),
        None => piv_residual_of(&sol.omega_sqrt2(), &sol.theta),
    }
}

/// Sign of a zero or pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Singularity {
    ZeroPlus,
    ZeroMinus,
    PolePlus,
    PoleMinus,
}

impl Singularity {
    pub const ALL: [Singularity; 4] =
        [Singularity::ZeroPlus, Singularity::ZeroMinus, Singularity::PolePlus, Singularity::PoleMinus];

    pub fn eps(self) -> i32 {
        match self {
            Singularity::ZeroPlus | Singularity::PolePlus => 1,
            Singularity::ZeroMinus | Singularity::PoleMinus => -1,
        }
    }

    pub fn is_pole(self) -> bool {
        matches!(self, Singularity::PolePlus | Singularity::PoleMinus)
    }
}

/// Which polynomial carries each kind of zero and pole of `(family, m, n)`.
/// Indices are reported as tabulated, even when they leave the family's range.
pub fn singularity_dictionary(family: Family, m: i64, n: i64) -> [(Singularity, PolySource); 4] {
    let (pf, rows) = match family {
        Family::HermiteI => (PolyFamily::Hermite, [(m + 1, n - 1), (m, n + 1), (m + 1, n), (m, n)]),
        Family::HermiteII => (PolyFamily::Hermite, [(m - 1, n + 1), (m + 1, n), (m, n), (m, n + 1)]),
        Family::HermiteIII => (PolyFamily::Hermite, [(m, n), (m + 1, n + 1), (m, n + 1), (m + 1, n)]),
        Family::Okamoto => (PolyFamily::Okamoto, [(m + 1, n - 1), (m, n + 1), (m + 1, n), (m, n)]),
    };
    let mut out = [(Singularity::ZeroPlus, PolySource { family: pf, m: 0, n: 0 }); 4];
    for (slot, (kind, (mm, nn))) in out.iter_mut().zip(Singularity::ALL.into_iter().zip(rows)) {
        *slot = (kind, PolySource { family: pf, m: mm, n: nn });
    }
    out
}
