//! The translations R1–R4 and their action on the rational families.
//!
//! For `ω = A/B`, `W = A'B − AB'` and `V = W + 4σθ₀B²` (so `ω' + 4σθ₀ = V/B²`):
//!
//! ```text
//! Rᵢω = [V² + 8(θ∞ + c)A²B² − A²(A + 2zB)²] / [2AB(A² + 2zAB + τV)]
//! ```
//!
//! with (σ, τ, c) = (+, −, −θ₀), (−, +, −1−θ₀), (−, −, θ₀), (+, +, −1+θ₀)
//! for i = 1..4.

use rug::Rational;

use super::{build_rational, Family, RatFunc, RationalError, RationalSolution, Theta};
use crate::exact_poly::{Field, Poly, QSqrt2};

/// σ, τ and `θ∞ + c` for one transform.
struct Coefficients {
    sigma: i64,
    tau: i64,
    c: Rational,
}

fn coefficients(i: u8, theta: &Theta) -> Result<Coefficients, RationalError> {
    let t0 = &theta.theta0;
    let (sigma, tau, c) = match i {
        1 => (1, -1, Rational::from(-t0)),
        2 => (-1, 1, Rational::from(-1 - t0)),
        3 => (-1, -1, t0.clone()),
        4 => (1, 1, Rational::from(t0 - 1)),
        _ => return Err(RationalError::InvalidTransform(i)),
    };
    Ok(Coefficients { sigma, tau, c })
}

/// Parameters after applying `Rᵢ`.
pub fn backlund_theta(i: u8, theta: &Theta) -> Result<Theta, RationalError> {
    let half = Rational::from((1, 2));
    let (d0, dinf) = match i {
        1 => (-1, 1),
        2 => (1, -1),
        3 => (1, 1),
        4 => (-1, -1),
        _ => return Err(RationalError::InvalidTransform(i)),
    };
    Ok(Theta::new(
        &theta.theta0 + Rational::from(&half * d0),
        &theta.theta_inf + Rational::from(&half * dinf),
    ))
}

/// Indices of the image of `(family, m, n)` under `Rᵢ`.
pub fn backlund_target(i: u8, family: Family, m: i64, n: i64) -> Result<(i64, i64), RationalError> {
    let t = match (family, i) {
        (Family::HermiteI | Family::Okamoto, 1) => (m + 1, n - 1),
        (Family::HermiteI | Family::Okamoto, 2) => (m - 1, n + 1),
        (Family::HermiteI | Family::Okamoto, 3) => (m, n + 1),
        (Family::HermiteI | Family::Okamoto, 4) => (m, n - 1),
        (Family::HermiteII, 1) => (m - 1, n),
        (Family::HermiteII, 2) => (m + 1, n),
        (Family::HermiteII, 3) => (m + 1, n - 1),
        (Family::HermiteII, 4) => (m - 1, n + 1),
        (Family::HermiteIII, 1) => (m - 1, n),
        (Family::HermiteIII, 2) => (m + 1, n),
        (Family::HermiteIII, 3) => (m, n + 1),
        (Family::HermiteIII, 4) => (m, n - 1),
        _ => return Err(RationalError::InvalidTransform(i)),
    };
    Ok(t)
}

fn transform<F: Field>(omega: &RatFunc<F>, k: &Coefficients, theta0: &Rational) -> Option<RatFunc<F>> {
    let (a, b) = (&omega.num, &omega.den);
    if a.is_zero() {
        return None;
    }
    let z = Poly::<F>::x();
    let b_sq = b.square();
    let w = a.derivative().mul(b).sub(&a.mul(&b.derivative()));
    let four_theta0 = F::from_rational(&Rational::from(theta0 * (4 * k.sigma)));
    let v = w.add(&b_sq.scale(&four_theta0));
    let a_sq = a.square();
    let zb2 = z.mul(b).scale_i64(2);
    let eight_c = F::from_rational(&Rational::from(&k.c * 8u32));
    let top = v.square().add(&a_sq.mul(&b_sq).scale(&eight_c)).sub(&a_sq.mul(&a.add(&zb2).square()));
    let inner = a_sq.add(&zb2.mul(a)).add(&v.scale_i64(k.tau));
    let bottom = a.mul(b).mul(&inner).scale_i64(2);
    if bottom.is_zero() {
        return None;
    }
    Some(RatFunc::from_parts(top, bottom).reduced())
}

/// `Rᵢ` on an arbitrary rational ω with parameters θ. `None` when ω or the
/// denominator of the transform vanishes identically.
pub fn apply_backlund<F: Field>(i: u8, omega: &RatFunc<F>, theta: &Theta) -> Result<Option<(RatFunc<F>, Theta)>, RationalError> {
    let new_theta = backlund_theta(i, theta)?;
    let k = shifted(i, theta)?;
    Ok(transform(omega, &k, &theta.theta0).map(|f| (f, new_theta)))
}

/// `Rᵢω` as a reduced rational function over ℚ(√2), together with the new θ.
pub fn backlund_raw(i: u8, sol: &RationalSolution) -> Result<(RatFunc<QSqrt2>, Theta), RationalError> {
    let theta = backlund_theta(i, &sol.theta)?;
    let k = shifted(i, &sol.theta)?;
    let degenerate = |reason: &str| RationalError::DegenerateTransform {
        transform: i,
        family: sol.family,
        m: sol.m,
        n: sol.n,
        reason: reason.to_string(),
    };
    let image = match sol.omega_rational() {
        Some(omega) => transform(&omega, &k, &sol.theta.theta0)
            .map(|f| RatFunc::from_parts(f.num.map(|c| QSqrt2::rational(c.clone())), f.den.map(|c| QSqrt2::rational(c.clone())))),
        None => transform(&sol.omega_sqrt2(), &k, &sol.theta.theta0),
    };
    let image = image.ok_or_else(|| degenerate("ω or the transform denominator vanishes identically"))?;
    Ok((image, theta))
}

/// Coefficients with `c` replaced by `θ∞ + c`.
fn shifted(i: u8, theta: &Theta) -> Result<Coefficients, RationalError> {
    let mut k = coefficients(i, theta)?;
    k.c += &theta.theta_inf;
    Ok(k)
}

/// `Rᵢ` applied to a family member. The image is computed exactly and
/// compared with the tabulated target, which is returned.
pub fn backlund(i: u8, sol: &RationalSolution) -> Result<RationalSolution, RationalError> {
    let (tm, tn) = backlund_target(i, sol.family, sol.m, sol.n)?;
    if !sol.family.valid_indices(tm, tn) {
        return Err(RationalError::DegenerateTransform {
            transform: i,
            family: sol.family,
            m: sol.m,
            n: sol.n,
            reason: format!("target ({tm}, {tn}) lies outside the family"),
        });
    }
    let (image, theta) = backlund_raw(i, sol)?;
    let target = build_rational(sol.family, tm, tn)?;
    let matches = image == target.omega_sqrt2() && theta == target.theta;
    if !matches {
        return Err(RationalError::TransformMismatch { transform: i, family: sol.family, m: sol.m, n: sol.n });
    }
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    #[test]
    fn r3_on_first_hermite_member() {
        let s = build_rational(Family::HermiteI, 0, 1).unwrap();
        let (img, _) = backlund_raw(3, &s).unwrap();
        // 8z / (4z² + 2)
        let expect = RatFunc::from_parts(
            Poly::<Integer>::from_i64s(&[0, 8]).to_rational().map(|c| QSqrt2::rational(c.clone())),
            Poly::<Integer>::from_i64s(&[2, 0, 4]).to_rational().map(|c| QSqrt2::rational(c.clone())),
        );
        assert_eq!(img, expect);
        assert_eq!(backlund(3, &s).unwrap().n, 2);
    }

    #[test]
    fn compositions() {
        let s = build_rational(Family::HermiteIII, 1, 1).unwrap();
        assert_eq!(backlund(2, &backlund(1, &s).unwrap()).unwrap(), s);
        let s = build_rational(Family::Okamoto, 0, 1).unwrap();
        let t = backlund(1, &s).unwrap();
        assert_eq!((t.m, t.n), (1, 0));
    }

    #[test]
    fn boundary_is_degenerate() {
        let s = build_rational(Family::HermiteI, 2, 0).unwrap();
        assert!(matches!(backlund(4, &s), Err(RationalError::DegenerateTransform { .. })));
        assert!(matches!(backlund(7, &s), Err(RationalError::InvalidTransform(7))));
    }
}
