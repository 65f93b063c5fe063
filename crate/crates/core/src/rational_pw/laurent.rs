//! Local expansion of ω about a point: value at regular points, the forms
//!
//! ```text
//! zero: ω = 4εθ₀ t + b t² + …
//! pole: ω = ε/t − a + ω₁ t + b t² + …,   ω₁ = (ε/3)(a² − 2 + 4(θ∞ − ε))
//! ```
//!
//! with `t = z − a`, and the free coefficient `b`.

use rug::{Complex, Float};
use serde_json::{json, Value};

use super::{RationalError, RationalSolution};
use crate::numeric::{self, abs_f64, complex_coeffs, complex_to_string, eval_with_derivative, series_div, taylor_shift};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    Zero,
    Pole,
    Regular,
}

#[derive(Clone, Debug)]
pub struct LaurentData {
    /// Centre after Newton polishing.
    pub center: Complex,
    pub kind: SingularityKind,
    /// ±1 at zeros and poles, 0 at regular points.
    pub eps: i32,
    /// Coefficient of t² at zeros and poles; the value ω(a) at regular points.
    pub b: Complex,
    /// Numerically extracted coefficient of t at a pole.
    pub omega1: Option<Complex>,
    /// Exponent of the first stored coefficient.
    pub valuation: i32,
    /// Coefficients of t^valuation, …, t^order.
    pub coeffs: Vec<Complex>,
    /// Largest deviation from the constrained coefficients.
    pub deviation: f64,
    pub prec: u32,
}

impl LaurentData {
    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i32) -> Option<&Complex> {
        usize::try_from(k - self.valuation).ok().and_then(|i| self.coeffs.get(i))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "center": complex_to_string(&self.center),
            "kind": format!("{:?}", self.kind).to_uppercase(),
            "eps": self.eps,
            "b": complex_to_string(&self.b),
            "omega1": self.omega1.as_ref().map(complex_to_string),
            "valuation": self.valuation,
            "coeffs": self.coeffs.iter().map(complex_to_string).collect::<Vec<_>>(),
            "deviation": self.deviation,
            "precision": self.prec,
        })
    }
}

/// Newton-polish `a` as a root of `p` if it is close to one. Returns `None`
/// when the first Newton step is larger than `near`.
fn polish(p: &[Complex], a: &Complex, near: f64, prec: u32) -> Option<Complex> {
    if p.len() < 2 {
        return None;
    }
    let mut x = a.clone();
    let (v, d) = eval_with_derivative(p, &x);
    if abs_f64(&d) == 0.0 {
        return None;
    }
    let step0 = Complex::with_val(prec, &v / &d);
    if abs_f64(&step0) > near {
        return None;
    }
    x -= step0;
    let stop = Float::with_val(prec, Float::i_exp(1, 8 - prec as i32)).to_f64();
    for _ in 0..64 {
        let (v, d) = eval_with_derivative(p, &x);
        let step = Complex::with_val(prec, &v / &d);
        let small = abs_f64(&step) <= stop * (1.0 + abs_f64(&x));
        x -= step;
        if small {
            break;
        }
    }
    Some(x)
}

/// Expansion of ω about `a` up to `t^order` at `prec` bits. `radius` is the
/// certified uncertainty of `a` (zero for an exact point).
pub fn laurent_at(
    sol: &RationalSolution,
    a: &Complex,
    radius: &Float,
    order: usize,
    prec: u32,
) -> Result<LaurentData, RationalError> {
    let scale = 1.0 + abs_f64(a);
    let needed = 2f64.powi(-(prec as i32) / 3) * scale;
    let r = radius.to_f64();
    if r > needed {
        return Err(RationalError::PrecisionInsufficient { radius: r, needed });
    }
    let omega = sol.omega_sqrt2();
    let num = complex_coeffs(&omega.num, prec);
    let den = complex_coeffs(&omega.den, prec);
    let a = Complex::with_val(prec, a);
    let near = 16.0 * needed.max(r);

    let (center, k_num, k_den) = if let Some(x) = polish(&den, &a, near, prec) {
        (x, 0usize, 1usize)
    } else if let Some(x) = polish(&num, &a, near, prec) {
        (x, 1, 0)
    } else {
        (a, 0, 0)
    };

    let mut tn = taylor_shift(&num, &center);
    let mut td = taylor_shift(&den, &center);
    let tiny = 2f64.powi(-(prec as i32) / 2);
    for (t, k) in [(&mut tn, k_num), (&mut td, k_den)] {
        if k == 1 {
            if abs_f64(&t[1]) <= tiny * numeric::max_abs_f64(t) {
                return Err(RationalError::LaurentMismatch("centre is a multiple root".into()));
            }
            t.remove(0);
        }
    }
    let valuation = k_num as i32 - k_den as i32;
    let len = (order as i64 - valuation as i64 + 1).max(1) as usize;
    let coeffs = series_div(&tn, &td, len);
    let coeff = |j: i32| -> Complex {
        usize::try_from(j - valuation)
            .ok()
            .and_then(|i| coeffs.get(i).cloned())
            .unwrap_or_else(|| numeric::zero(prec))
    };

    let theta0 = sol.theta.theta0.to_f64();
    let theta_inf = Float::with_val(prec, &sol.theta.theta_inf);
    let tol = 2f64.powi(-(prec as i32) / 4) * scale * scale;
    let (kind, eps, b, omega1, deviation) = match valuation {
        -1 => {
            let res = coeff(-1);
            let eps = if res.real().is_sign_negative() { -1 } else { 1 };
            let expected_w1 = {
                let a2 = Complex::with_val(prec, center.square_ref());
                let inner = a2 - 2 + Complex::with_val(prec, Float::with_val(prec, &theta_inf - eps) * 4u32);
                inner * eps / 3
            };
            let w1 = coeff(1);
            let d_res = abs_f64(&Complex::with_val(prec, &res - eps));
            let d_const = abs_f64(&Complex::with_val(prec, &coeff(0) + &center));
            let d_w1 = abs_f64(&Complex::with_val(prec, &w1 - &expected_w1));
            (SingularityKind::Pole, eps, coeff(2), Some(w1), d_res.max(d_const).max(d_w1))
        }
        1 => {
            let c1 = coeff(1);
            let ratio = c1.real().to_f64() / (4.0 * theta0);
            let eps = if ratio < 0.0 { -1 } else { 1 };
            let d = abs_f64(&Complex::with_val(prec, &c1 - 4.0 * eps as f64 * theta0));
            (SingularityKind::Zero, eps, coeff(2), None, d)
        }
        _ => (SingularityKind::Regular, 0, coeff(0), None, 0.0),
    };
    if deviation > tol {
        return Err(RationalError::LaurentMismatch(format!(
            "{kind:?} with ε = {eps}: deviation {deviation:e} exceeds {tol:e}"
        )));
    }
    Ok(LaurentData { center, kind, eps, b, omega1, valuation, coeffs, deviation, prec })
}

#[cfg(test)]
mod tests {
    use super::super::{build_rational, Family};
    use super::*;

    fn at(re: f64, im: f64) -> Complex {
        Complex::with_val(256, (re, im))
    }

    #[test]
    fn simple_pole_of_first_member() {
        let s = build_rational(Family::HermiteI, 0, 1).unwrap();
        let l = laurent_at(&s, &at(0.0, 0.0), &Float::new(256), 4, 256).unwrap();
        assert_eq!(l.kind, SingularityKind::Pole);
        assert_eq!(l.eps, 1);
        assert!(abs_f64(l.coeff(0).unwrap()) < 1e-60);
    }

    #[test]
    fn negative_pole_and_free_coefficient() {
        // ω = 8z/(4z² − 2) − 1/z = −1/z − 4z − 8z³ + …
        let s = build_rational(Family::HermiteI, 1, 1).unwrap();
        let l = laurent_at(&s, &at(1e-30, 0.0), &Float::with_val(256, 1e-30), 4, 256).unwrap();
        assert_eq!((l.kind, l.eps), (SingularityKind::Pole, -1));
        assert!(abs_f64(&Complex::with_val(256, l.omega1.as_ref().unwrap() + 4)) < 1e-60);
        assert!(abs_f64(&l.b) < 1e-60);
    }

    #[test]
    fn regular_point_value() {
        let s = build_rational(Family::HermiteIII, 0, 0).unwrap();
        let l = laurent_at(&s, &at(1.0, 0.0), &Float::new(256), 3, 256).unwrap();
        assert_eq!(l.kind, SingularityKind::Regular);
        assert!(abs_f64(&Complex::with_val(256, &l.b + 2)) < 1e-70);
    }

    #[test]
    fn coarse_centre_is_rejected() {
        let s = build_rational(Family::HermiteI, 0, 1).unwrap();
        let err = laurent_at(&s, &at(0.0, 0.0), &Float::with_val(256, 1e-5), 3, 256).unwrap_err();
        assert!(matches!(err, RationalError::PrecisionInsufficient { .. }));
    }
}
