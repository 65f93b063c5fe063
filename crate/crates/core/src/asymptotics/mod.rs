//! Large-`m` asymptotics of the roots of `H_{m,n}` at fixed `n`.
//!
//! With `E = 2m + n` and `α = E^(−1/2) z`, the roots sit near the lattice
//!
//! ```text
//! f(α_R) = πk/E,   α_I = g_{j,E}(α_R),   j ∈ {−n+1, −n+3, …, n−1}
//! f(x) = ½(x√(1−x²) − arccos x) + π/4
//! g_{j,E}(x) = (2j log(2√E (1−x²)^¾) − log F_{n,j}) / (2E√(1−x²))
//! F_{n,j} = Γ((1+n+j)/2) / Γ((1+n−j)/2)
//! ```
//!
//! and more precisely near the zeros of `sin Φ(α; E)`.
//!
//! Everything transcendental is evaluated with MPFR at the caller's
//! precision; doubles appear only in exports.

use std::fmt::Write as _;

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::rootfind::RootSet;

/// Working precision used when the caller has no preference (≈ 77 digits).
pub const DEFAULT_PREC: u32 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("Φ has a branch point at α = ±1")]
    BranchPoint,
    #[error("Newton iteration for the refined root did not converge (j = {j}, k = {k})")]
    NonConvergence { j: i64, k: f64 },
}

type Result<T> = std::result::Result<T, AsymptoticsError>;

fn domain(msg: impl Into<String>) -> AsymptoticsError {
    AsymptoticsError::Domain(msg.into())
}

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `m`, `n` and the derived `E = 2m + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BulkParams {
    pub m: u64,
    pub n: u64,
}

impl BulkParams {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if 2 * m + n == 0 {
            return Err(domain("E = 2m + n must be positive"));
        }
        Ok(BulkParams { m, n })
    }

    pub fn e(&self) -> u64 {
        2 * self.m + self.n
    }

    /// `J_n = {−n+1, −n+3, …, n−1}`.
    pub fn j_values(&self) -> Vec<i64> {
        let n = self.n as i64;
        (0..n).map(|i| -n + 1 + 2 * i).collect()
    }

    /// True when `k` is on the grid: integers for odd `m`, half-integers for
    /// even `m`.
    pub fn on_grid(&self, k: f64) -> bool {
        let k2 = 2.0 * k;
        if k2.fract() != 0.0 {
            return false;
        }
        let odd = (k2 as i64).rem_euclid(2) == 1;
        odd == self.m.is_multiple_of(2)
    }

    /// Grid values of `k` with `|k| ≤ bound` and `|k| < E/4`, ascending.
    pub fn k_grid(&self, bound: f64) -> Vec<f64> {
        let quarter = self.e() as f64 / 4.0;
        let limit = bound.min(quarter);
        let top = (2.0 * limit).floor() as i64;
        (-top..=top)
            .map(|k2| k2 as f64 / 2.0)
            .filter(|&k| self.on_grid(k) && k.abs() <= limit && k.abs() < quarter)
            .collect()
    }

    fn check_j(&self, j: i64) -> Result<()> {
        if self.j_values().contains(&j) {
            Ok(())
        } else {
            Err(domain(format!("j = {j} is not in J_{}", self.n)))
        }
    }

    fn check_k(&self, k: f64) -> Result<()> {
        if !self.on_grid(k) {
            let kind = if self.m.is_multiple_of(2) { "a half-integer" } else { "an integer" };
            return Err(domain(format!("k = {k} must be {kind} for m = {}", self.m)));
        }
        if k.abs() >= self.e() as f64 / 4.0 {
            return Err(domain(format!("|k| = {} must be below E/4 = {}", k.abs(), self.e() as f64 / 4.0)));
        }
        Ok(())
    }
}

/// Which predictions a lattice contains.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Regime {
    /// `|k| ≤ σE`, `0 < σ < 1/4`.
    Bulk { sigma: f64 },
    /// `|k| ≤ (1/4 − s E^(−3(1−δ)/2)) E`, `1/3 < δ ≤ 1`, `s > 0`.
    Edge { delta: f64, s: f64 },
}

impl Regime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::Bulk { sigma } if !(sigma > 0.0 && sigma < 0.25) => {
                Err(domain(format!("σ = {sigma} must lie in (0, 1/4)")))
            }
            Regime::Edge { delta, .. } if !(delta > 1.0 / 3.0 && delta <= 1.0) => {
                Err(domain(format!("δ = {delta} must lie in (1/3, 1]")))
            }
            Regime::Edge { s, .. } if s.is_nan() || s <= 0.0 => Err(domain(format!("s = {s} must be positive"))),
            _ => Ok(()),
        }
    }

    /// Largest admissible `|k|`. The edge bound is widened by half a grid
    /// step so that `⌊E/4 − √E⌋ + ½` is admitted at δ = 2/3, s = 1.
    pub fn k_bound(&self, e: u64) -> f64 {
        let e = e as f64;
        match *self {
            Regime::Bulk { sigma } => sigma * e,
            Regime::Edge { delta, s } => (0.25 - s * e.powf(-1.5 * (1.0 - delta))) * e + 0.5,
        }
    }

    /// Disc radius for the rescaled roots: `C E^(−4/3)` in the bulk and
    /// `C E^(−δ−1/3)` at the edge.
    pub fn radius(&self, e: u64, constant: f64) -> f64 {
        let e = e as f64;
        match *self {
            Regime::Bulk { .. } => constant * e.powf(-4.0 / 3.0),
            Regime::Edge { delta, .. } => constant * e.powf(-delta - 1.0 / 3.0),
        }
    }
}

/// `k = ⌊E/4 − √E⌋ + ½`, the index used for the approach to the edge.
pub fn edge_k(e: u64) -> f64 {
    let e = e as f64;
    (e / 4.0 - e.sqrt()).floor() + 0.5
}

/// `f(x) = ½(x√(1−x²) − arccos x) + π/4` on `[−1, 1]`.
pub fn f_map(x: &Float) -> Result<Float> {
    let prec = x.prec();
    if x.is_nan() || *x < -1 || *x > 1 {
        return Err(domain(format!("f needs −1 ≤ x ≤ 1, got {}", x.to_f64())));
    }
    let root = Float::with_val(prec, 1 - Float::with_val(prec, x.square_ref())).sqrt();
    let acos = Float::with_val(prec, x.acos_ref());
    let half = Float::with_val(prec, x * &root) - acos;
    Ok(half / 2u32 + pi(prec) / 4u32)
}

/// Inverse of [`f_map`]: bisection on `[−1, 1]` with Newton steps
/// (`f'(x) = √(1−x²)`) whenever they stay inside the bracket.
pub fn f_inverse(y: &Float) -> Result<Float> {
    let prec = y.prec();
    let quarter_pi = pi(prec) / 4u32;
    let slack = Float::with_val(prec, Float::i_exp(1, 4 - prec as i32));
    if y.is_nan() || Float::with_val(prec, y.abs_ref()) > Float::with_val(prec, &quarter_pi + &slack) {
        return Err(domain(format!("f⁻¹ needs |y| ≤ π/4, got {}", y.to_f64())));
    }
    let mut lo = Float::with_val(prec, -1);
    let mut hi = Float::with_val(prec, 1);
    if *y >= Float::with_val(prec, &quarter_pi - &slack) {
        return Ok(hi);
    }
    if *y <= Float::with_val(prec, &slack - &quarter_pi) {
        return Ok(lo);
    }
    let tol = Float::with_val(prec, Float::i_exp(1, 8 - prec as i32));
    let mut x = Float::with_val(prec, y * 4u32) / pi(prec);
    for _ in 0..(4 * prec) {
        let r = f_map(&x)? - y;
        if r.is_zero() {
            return Ok(x);
        }
        if r.is_sign_positive() {
            hi.clone_from(&x);
        } else {
            lo.clone_from(&x);
        }
        let deriv = Float::with_val(prec, 1 - Float::with_val(prec, x.square_ref())).sqrt();
        let newton = Float::with_val(prec, &x - Float::with_val(prec, &r / &deriv));
        let next = if deriv.is_zero() || newton <= lo || newton >= hi {
            Float::with_val(prec, &lo + &hi) / 2u32
        } else {
            newton
        };
        let step = Float::with_val(prec, &next - &x).abs();
        x = next;
        if step <= tol || Float::with_val(prec, &hi - &lo) <= tol {
            break;
        }
    }
    Ok(x)
}

/// `F_{n,j} = Γ((1+n+j)/2) / Γ((1+n−j)/2)`. For `j ∈ J_n` both arguments
/// are positive integers, so this is a ratio of factorials.
pub fn gamma_ratio(n: u64, j: i64) -> Result<Rational> {
    let n = n as i64;
    if n < 1 || j.abs() > n - 1 || (n - 1 - j).rem_euclid(2) != 0 {
        return Err(domain(format!("j = {j} is not in J_{n}")));
    }
    let a = (1 + n + j) / 2;
    let b = (1 + n - j) / 2;
    let fact = |k: i64| Integer::from(Integer::factorial((k - 1) as u32));
    Ok(Rational::from((fact(a), fact(b))))
}

fn ln_f(n: u64, j: i64, prec: u32) -> Result<Float> {
    Ok(Float::with_val(prec, &gamma_ratio(n, j)?).ln())
}

/// `g_{j,E}(x)` for `|x| < 1`.
pub fn g_map(j: i64, e: u64, n: u64, x: &Float) -> Result<Float> {
    let prec = x.prec();
    if x.is_nan() || *x <= -1 || *x >= 1 {
        return Err(domain(format!("g needs |x| < 1, got {}", x.to_f64())));
    }
    let one_minus = Float::with_val(prec, 1 - Float::with_val(prec, x.square_ref()));
    let e_f = Float::with_val(prec, e);
    // log(2√E (1−x²)^¾)
    let log_term = Float::with_val(prec, 2u32).ln() + Float::with_val(prec, e_f.ln_ref()) / 2u32
        + Float::with_val(prec, one_minus.ln_ref()) * 3u32 / 4u32;
    let top = log_term * (2 * j) - ln_f(n, j, prec)?;
    Ok(top / (e_f * 2u32 * one_minus.sqrt()))
}

/// The approximate root `α_{j,k}` of the rescaled polynomial.
pub fn alpha_jk(j: i64, k: f64, params: &BulkParams, prec: u32) -> Result<Complex> {
    params.check_j(j)?;
    params.check_k(k)?;
    let e = params.e();
    let y = pi(prec) * Float::with_val(prec, k) / e;
    let re = f_inverse(&y)?;
    let im = g_map(j, e, params.n, &re)?;
    Ok(Complex::with_val(prec, (re, im)))
}

#[derive(Clone, Debug)]
pub struct LatticePoint {
    pub j: i64,
    pub k: f64,
    pub alpha: Complex,
}

#[derive(Clone, Debug)]
pub struct LatticePrediction {
    pub entries: Vec<LatticePoint>,
    pub params: BulkParams,
    pub regime: Regime,
}

impl LatticePrediction {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, j: i64, k: f64) -> Option<&Complex> {
        self.entries.iter().find(|p| p.j == j && p.k == k).map(|p| &p.alpha)
    }

    pub fn alphas(&self) -> Vec<Complex> {
        self.entries.iter().map(|p| p.alpha.clone()).collect()
    }

    /// CSV with header `j,k,re,im`; doubles in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,re,im\n");
        for p in &self.entries {
            let _ = writeln!(out, "{},{},{:?},{:?}", p.j, p.k, p.alpha.real().to_f64(), p.alpha.imag().to_f64());
        }
        out
    }
}

/// All `α_{j,k}` with `j ∈ J_n` and `k` in the regime's range.
pub fn lattice(params: &BulkParams, regime: Regime, prec: u32) -> Result<LatticePrediction> {
    regime.validate()?;
    let ks = params.k_grid(regime.k_bound(params.e()));
    let mut entries = Vec::with_capacity(ks.len() * params.n as usize);
    for j in params.j_values() {
        for &k in &ks {
            entries.push(LatticePoint { j, k, alpha: alpha_jk(j, k, params, prec)? });
        }
    }
    Ok(LatticePrediction { entries, params: *params, regime })
}

/// `(x, g_{j,E}(x))` on `samples` equally spaced points of `[−x_max, x_max]`.
pub fn g_curve(j: i64, e: u64, n: u64, x_max: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    if !(x_max > 0.0 && x_max < 1.0) || samples < 2 {
        return Err(domain("g curve needs 0 < x_max < 1 and at least two samples"));
    }
    (0..samples)
        .map(|i| {
            let x = -x_max + 2.0 * x_max * i as f64 / (samples - 1) as f64;
            Ok((x, g_map(j, e, n, &Float::with_val(64, x))?.to_f64()))
        })
        .collect()
}

/// `L(α) = j log(2(1−α²)^¾ √E) − ½ log F_{n,j}`, with `(1−α²)^¾` taken
/// through the principal logarithm.
fn log_term(alpha: &Complex, e: u64, n: u64, j: i64) -> Result<Complex> {
    let prec = alpha.prec().0;
    let one_minus = Complex::with_val(prec, 1 - Complex::with_val(prec, alpha.square_ref()));
    let ln_one_minus = one_minus.ln();
    let consts = Float::with_val(prec, 2u32).ln() + Float::with_val(prec, e).ln() / 2u32;
    let body = ln_one_minus * 3u32 / 4u32 + consts;
    Ok(body * j - ln_f(n, j, prec)? / 2u32)
}

fn check_branch(alpha: &Complex) -> Result<()> {
    if alpha.imag().is_zero() && (*alpha.real() == 1 || *alpha.real() == -1) {
        return Err(AsymptoticsError::BranchPoint);
    }
    Ok(())
}

/// `f` continued to complex `α` with principal branches.
fn f_complex(alpha: &Complex) -> Complex {
    let prec = alpha.prec().0;
    let root = Complex::with_val(prec, 1 - Complex::with_val(prec, alpha.square_ref())).sqrt();
    let acos = Complex::with_val(prec, alpha.acos_ref());
    (Complex::with_val(prec, alpha * &root) - acos) / 2u32 + pi(prec) / 4u32
}

/// The phase `Φ(α; E)`, whose sine governs the roots:
///
/// ```text
/// Φ = (E/2)(−α√(1−α²) + arccos α) − (2+n)π/4 + i(j log(2(1−α²)^¾ √E) − ½ log F_{n,j})
/// ```
pub fn phase_phi(alpha: &Complex, e: u64, n: u64, j: i64) -> Result<Complex> {
    check_branch(alpha)?;
    let prec = alpha.prec().0;
    let root = Complex::with_val(prec, 1 - Complex::with_val(prec, alpha.square_ref())).sqrt();
    let acos = Complex::with_val(prec, alpha.acos_ref());
    let real_part = (acos - Complex::with_val(prec, alpha * &root)) * e / 2u32;
    let shift = pi(prec) * (2 + n) / 4u32;
    let im = log_term(alpha, e, n, j)?;
    Ok(real_part - shift + im * Complex::with_val(prec, (0, 1)))
}

/// Root of `f(α) − i L(α)/E = πk/E` near `α_{j,k}`, which is a zero of
/// `sin Φ`. Newton uses `d/dα [f − iL/E] = √(1−α²) + 3ijα / (2E(1−α²))`.
pub fn refined_alpha(j: i64, k: f64, params: &BulkParams, prec: u32) -> Result<Complex> {
    let mut alpha = alpha_jk(j, k, params, prec)?;
    let e = params.e();
    let target = pi(prec) * Float::with_val(prec, k) / e;
    let i = Complex::with_val(prec, (0, 1));
    let tol = Float::with_val(prec, Float::i_exp(1, 16 - prec as i32)).to_f64();
    for _ in 0..100 {
        check_branch(&alpha)?;
        let l = log_term(&alpha, e, params.n, j)?;
        let value = f_complex(&alpha) - Complex::with_val(prec, &l * &i) / e - &target;
        let one_minus = Complex::with_val(prec, 1 - Complex::with_val(prec, alpha.square_ref()));
        let correction = Complex::with_val(prec, &alpha * &i) * (3 * j) / (Complex::with_val(prec, &one_minus * 2u32) * e);
        let deriv = one_minus.sqrt() + correction;
        let step = value / deriv;
        let size = crate::numeric::abs_f64(&step);
        alpha -= step;
        if !size.is_finite() {
            break;
        }
        if size <= tol * (1.0 + crate::numeric::abs_f64(&alpha)) {
            return Ok(alpha);
        }
    }
    Err(AsymptoticsError::NonConvergence { j, k })
}

/// `(n/π)(x√(1−x²) + arcsin x)` with `x` clamped to `[−1, 1]`.
fn semicircle_cdf(x: f64, n: u64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    n as f64 / std::f64::consts::PI * (x * (1.0 - x * x).sqrt() + x.asin())
}

/// Fraction of rescaled roots (per unit `m`) with real part in `[a, b]`,
/// and the semicircle prediction `∫_a^b (2n/π)√(1−x²) dx`. `m` is recovered
/// as `#roots / n`.
pub fn semicircle_compare(rescaled: &RootSet, a: f64, b: f64, n: u64) -> Result<(f64, f64)> {
    if a.is_nan() || b.is_nan() || a > b || n == 0 {
        return Err(domain("semicircle comparison needs a ≤ b and n ≥ 1"));
    }
    let m = rescaled.len() as f64 / n as f64;
    let inside = rescaled
        .roots
        .iter()
        .filter(|z| {
            let re = z.real().to_f64();
            re >= a && re <= b
        })
        .count();
    let empirical = if m > 0.0 { inside as f64 / m } else { 0.0 };
    Ok((empirical, semicircle_cdf(b, n) - semicircle_cdf(a, n)))
}

/// Roots of `H_{m,n}` mapped to `α = z/√E`.
pub fn rescale_roots(roots: &RootSet, e: u64) -> RootSet {
    let factor = Float::with_val(roots.prec, e).sqrt().recip();
    roots.rescaled(&factor)
}

/// Small JSON summary of a lattice, used in reports.
pub fn regime_json(regime: &Regime, params: &BulkParams) -> Value {
    json!({ "regime": regime, "m": params.m, "n": params.n, "E": params.e() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn fl(x: f64) -> Float {
        Float::with_val(P, x)
    }

    #[test]
    fn f_endpoints() {
        assert!(f_map(&fl(0.0)).unwrap().to_f64().abs() < 1e-70);
        let q = std::f64::consts::FRAC_PI_4;
        assert!((f_map(&fl(1.0)).unwrap().to_f64() - q).abs() < 1e-15);
        assert!((f_map(&fl(-1.0)).unwrap().to_f64() + q).abs() < 1e-15);
        assert!(f_map(&fl(1.5)).is_err());
    }

    #[test]
    fn f_inverse_round_trip() {
        let x = fl(0.37);
        let back = f_inverse(&f_map(&x).unwrap()).unwrap();
        assert!(Float::with_val(P, &back - &x).abs() < 1e-70);
        assert_eq!(f_inverse(&(pi(P) / 4u32)).unwrap(), 1);
        assert!(f_inverse(&fl(0.0)).unwrap().is_zero());
        assert!(f_inverse(&fl(1.0)).is_err());
    }

    #[test]
    fn factorial_ratio() {
        assert_eq!(gamma_ratio(5, 4).unwrap(), 24);
        assert_eq!(gamma_ratio(5, -4).unwrap(), Rational::from((1, 24)));
        assert_eq!(gamma_ratio(7, 0).unwrap(), 1);
        assert!(gamma_ratio(5, 3).is_err());
    }

    #[test]
    fn g_at_zero_and_j_zero() {
        let v = g_map(0, 85, 5, &fl(0.3)).unwrap();
        assert!(v.to_f64().abs() < 1e-70);
        let at0 = g_map(2, 85, 5, &fl(0.0)).unwrap().to_f64();
        let expect = (4.0 * (2.0 * 85f64.sqrt()).ln() - 6f64.ln()) / 170.0;
        assert!((at0 - expect).abs() < 1e-14);
        assert!(g_map(0, 85, 5, &fl(1.0)).is_err());
    }

    #[test]
    fn grid_parity() {
        let even = BulkParams::new(40, 5).unwrap();
        assert_eq!(even.k_grid(17.0).len(), 34);
        let odd = BulkParams::new(3, 1).unwrap();
        assert_eq!(odd.k_grid(0.2 * 7.0), vec![-1.0, 0.0, 1.0]);
        assert!(alpha_jk(0, 1.0, &even, P).is_err());
        assert!(alpha_jk(1, 0.5, &even, P).is_err());
    }

    #[test]
    fn origin_and_conjugation() {
        let p = BulkParams::new(3, 3).unwrap();
        let a = alpha_jk(0, 0.0, &p, P).unwrap();
        assert!(a.real().is_zero() && a.imag().is_zero());
        let b = BulkParams::new(40, 5).unwrap();
        let plus = alpha_jk(4, 2.5, &b, P).unwrap();
        let minus = alpha_jk(-4, 2.5, &b, P).unwrap();
        assert_eq!(Complex::with_val(P, plus.conj_ref()), minus);
    }

    #[test]
    fn phase_at_origin() {
        let phi = phase_phi(&Complex::with_val(P, 0), 85, 5, 0).unwrap();
        let expect = (85.0 - 7.0) * std::f64::consts::PI / 4.0;
        assert!((phi.real().to_f64() - expect).abs() < 1e-12);
        assert!(phi.imag().to_f64().abs() < 1e-70);
        assert_eq!(phase_phi(&Complex::with_val(P, 1), 85, 5, 0), Err(AsymptoticsError::BranchPoint));
    }

    #[test]
    fn refined_root_zeroes_the_sine() {
        let p = BulkParams::new(40, 5).unwrap();
        let r = refined_alpha(4, 2.5, &p, P).unwrap();
        let s = phase_phi(&r, p.e(), 5, 4).unwrap().sin();
        assert!(crate::numeric::abs_f64(&s) < 1e-60);
        let odd = BulkParams::new(11, 3).unwrap();
        assert!(refined_alpha(0, 0.0, &odd, P).unwrap().imag().to_f64().abs() < 1e-70);
    }

    #[test]
    fn semicircle_total_mass() {
        assert!((semicircle_cdf(1.0, 5) - semicircle_cdf(-1.0, 5) - 5.0).abs() < 1e-14);
        assert_eq!(semicircle_cdf(0.0, 5), 0.0);
    }

    #[test]
    fn edge_index_is_admitted() {
        let p = BulkParams::new(144, 5).unwrap();
        let regime = Regime::Edge { delta: 2.0 / 3.0, s: 1.0 };
        let k = edge_k(p.e());
        assert_eq!(k, 56.5);
        assert!(p.k_grid(regime.k_bound(p.e())).contains(&k));
        assert!(Regime::Bulk { sigma: 0.3 }.validate().is_err());
    }
}
