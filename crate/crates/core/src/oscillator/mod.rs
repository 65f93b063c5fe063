//! Roots of `H_{m,n}` through the quasi-exactly-solvable oscillator
//!
//! ```text
//! ψ'' = V ψ,   V = λ² + 2aλ + a² + 2(1−θ∞) − [b + (2θ∞ − ½)a]/λ + (θ₀² − ¼)/λ²
//! ```
//!
//! and the no-logarithm condition of the rescaled oscillator at `λ = 0`.
//!
//! Substituting `ψ = λ^s e^(σ(λ²/2 + aλ)) Σ p_k λ^k` gives the three-term
//! recurrence
//!
//! ```text
//! (k+1)(k+2s) p_{k+1} + (2σak + C) p_k + (2σ(k−1) + K) p_{k−1} = 0
//! K = σ(1+2s) − 2(1−θ∞),   C = b + (2sσ + 2θ∞ − ½) a
//! ```
//!
//! A polynomial of degree `d` needs `K = −2σd` (fixed by θ) and the
//! equation at `k = d`, a polynomial in `b` of degree `d+1`. With the
//! dominant exponent `s = ½ − θ₀` the leading factor vanishes at
//! `k = 2θ₀ − 1`, and the equation there is the no-log condition.
//! `z = a` is a root exactly when the two conditions share a root `b`.

use rug::{Complex, Float, Rational};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::numeric::{abs_f64, complex_to_string, eval, eval_with_derivative};
use crate::rational_pw::{Family, Theta};
use crate::rootfind::{find_roots_complex, RootError};

#[derive(Debug, Clone, Error)]
pub enum OscillatorError {
    #[error("a is not a root: solvability residual {residual:e}")]
    NotARoot { residual: f64 },
    #[error("singular coefficient system: {0}")]
    SingularSystem(String),
    #[error("{family} has no oscillator characterisation here (m = {m}, n = {n}); need a Hermite family with m, n ≥ 1")]
    InvalidIndex { family: Family, m: i64, n: i64 },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Roots(#[from] RootError),
}

type Result<T> = std::result::Result<T, OscillatorError>;

/// `g(λ, z) = ½λ² + zλ`.
pub fn g_fn(lambda: &Complex, z: &Complex) -> Complex {
    let prec = lambda.prec().0;
    Complex::with_val(prec, lambda.square_ref()) / 2u32 + Complex::with_val(prec, lambda * z)
}

/// The potential with its parameters.
#[derive(Clone, Debug)]
pub struct OscillatorSpec {
    pub a: Complex,
    pub b: Complex,
    pub theta: Theta,
}

impl OscillatorSpec {
    pub fn potential(&self, lambda: &Complex) -> Complex {
        let prec = lambda.prec().0;
        let t0 = Float::with_val(prec, &self.theta.theta0);
        let ti = Float::with_val(prec, &self.theta.theta_inf);
        let shifted = Complex::with_val(prec, lambda + &self.a).square();
        let constant = (1 - ti.clone()) * 2u32;
        let pole1 = Complex::with_val(prec, &self.b + Complex::with_val(prec, &self.a * (ti * 2u32 - 0.5f64)));
        let pole2 = t0.square() - 0.25f64;
        shifted + constant - pole1 / lambda + Complex::with_val(prec, pole2 / Complex::with_val(prec, lambda.square_ref()))
    }
}

/// One power-exponential ansatz `λ^s e^(σg) p`, with the index at which
/// the recurrence closes.
#[derive(Clone, Debug)]
struct Ansatz {
    s: Rational,
    sigma: i32,
    k_star: usize,
    theta_inf: Rational,
}

/// Polynomials in `b`, lowest degree first.
type BPoly = Vec<Complex>;

fn p_add(x: &BPoly, y: &BPoly, prec: u32) -> BPoly {
    let len = x.len().max(y.len());
    (0..len)
        .map(|i| match (x.get(i), y.get(i)) {
            (Some(u), Some(v)) => Complex::with_val(prec, u + v),
            (Some(u), None) | (None, Some(u)) => u.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn p_scale(x: &BPoly, c: &Complex, prec: u32) -> BPoly {
    x.iter().map(|u| Complex::with_val(prec, u * c)).collect()
}

/// `(c + b) x`.
fn p_mul_linear(x: &BPoly, c: &Complex, prec: u32) -> BPoly {
    let mut out = p_scale(x, c, prec);
    out.push(Complex::new(prec));
    for (i, u) in x.iter().enumerate() {
        out[i + 1] += u;
    }
    out
}

/// `|E(b)| / Σ|e_i| max(|b|, 1)^i`. The floor on `|b|` keeps the ratio
/// meaningful when `b` and the constant term both vanish with `a`.
fn normalised(poly: &BPoly, b: &Complex) -> f64 {
    let prec = b.prec().0;
    let value = abs_f64(&eval(poly, b));
    let r = Float::with_val(prec, b.abs_ref()).max(&Float::with_val(prec, 1));
    let mut scale = Float::new(prec);
    for c in poly.iter().rev() {
        scale *= &r;
        scale += Float::with_val(prec, c.abs_ref());
    }
    let scale = scale.to_f64();
    if scale == 0.0 {
        value
    } else {
        value / scale
    }
}

impl Ansatz {
    fn k_const(&self) -> Rational {
        (self.sigma * (1 + Rational::from(&self.s * 2))) - 2 * (1 - self.theta_inf.clone())
    }

    /// The recurrence run symbolically in `b`: the coefficients `p_0..p_{k*}`
    /// and the closing equation.
    fn run(&self, a: &Complex, prec: u32) -> Result<(Vec<BPoly>, BPoly)> {
        let sigma = self.sigma;
        let k_const = Float::with_val(prec, &self.k_const());
        let c_a = {
            let factor = Rational::from(&self.s * (2 * sigma)) + Rational::from(&self.theta_inf * 2) - Rational::from((1, 2));
            Complex::with_val(prec, a * Float::with_val(prec, &factor))
        };
        let step = |k: usize, pk: &BPoly, prev: Option<&BPoly>| -> BPoly {
            let diag = Complex::with_val(prec, a * (2 * sigma * k as i32)) + &c_a;
            let mut out = p_mul_linear(pk, &diag, prec);
            if let Some(prev) = prev {
                let off = Complex::with_val(prec, Float::with_val(prec, &k_const + 2 * sigma * (k as i32 - 1)));
                out = p_add(&out, &p_scale(prev, &off, prec), prec);
            }
            out
        };
        let mut p: Vec<BPoly> = vec![vec![Complex::with_val(prec, 1)]];
        for k in 0..self.k_star {
            let lead = (k as i64 + 1) * (Rational::from(k as i64) + Rational::from(&self.s * 2));
            if lead == 0 {
                return Err(OscillatorError::SingularSystem(format!("leading factor vanishes at k = {k}")));
            }
            let inv = Complex::with_val(prec, -Float::with_val(prec, &lead.recip()));
            let next = p_scale(&step(k, &p[k], k.checked_sub(1).map(|i| &p[i])), &inv, prec);
            p.push(next);
        }
        let k = self.k_star;
        let closing = step(k, &p[k], k.checked_sub(1).map(|i| &p[i]));
        Ok((p, closing))
    }
}

/// θ and the two ansätze for a family. For HI and HII the second entry is
/// the no-log condition, for HIII it is the `q` ansatz.
fn setup(family: Family, m: i64, n: i64) -> Result<(Theta, Ansatz, Ansatz)> {
    if m < 1 || n < 1 || family == Family::Okamoto {
        return Err(OscillatorError::InvalidIndex { family, m, n });
    }
    let half = |x: i64| Rational::from((x, 2));
    let (theta, main, second) = match family {
        Family::HermiteI => {
            let theta = Theta::new(half(n), half(2 * m + 2 + n));
            let main = Ansatz { s: half(n + 1), sigma: -1, k_star: (m - 1) as usize, theta_inf: theta.theta_inf.clone() };
            let nolog = Ansatz { s: half(1 - n), sigma: -1, k_star: (n - 1) as usize, theta_inf: theta.theta_inf.clone() };
            (theta, main, nolog)
        }
        Family::HermiteII => {
            let theta = Theta::new(half(m), half(2 - m - 2 * n));
            let main = Ansatz { s: half(m + 1), sigma: 1, k_star: (n - 1) as usize, theta_inf: theta.theta_inf.clone() };
            let nolog = Ansatz { s: half(1 - m), sigma: 1, k_star: (m - 1) as usize, theta_inf: theta.theta_inf.clone() };
            (theta, main, nolog)
        }
        Family::HermiteIII => {
            let theta = Theta::new(half(m + n), half(n - m + 2));
            let s = half(1 - m - n);
            let p = Ansatz { s: s.clone(), sigma: -1, k_star: (n - 1) as usize, theta_inf: theta.theta_inf.clone() };
            let q = Ansatz { s, sigma: 1, k_star: (m - 1) as usize, theta_inf: theta.theta_inf.clone() };
            (theta, p, q)
        }
        Family::Okamoto => unreachable!(),
    };
    // a polynomial ansatz needs K = −2σd
    let polys: &[&Ansatz] = if family == Family::HermiteIII { &[&main, &second] } else { &[&main] };
    if polys.iter().any(|a| degree_mismatch(a)) {
        return Err(OscillatorError::SingularSystem("degree condition K = −2σd fails".into()));
    }
    Ok((theta, main, second))
}

fn degree_mismatch(ans: &Ansatz) -> bool {
    ans.k_const() != -2 * ans.sigma * ans.k_star as i32
}

/// θ of the oscillator attached to a family.
pub fn oscillator_theta(family: Family, m: i64, n: i64) -> Result<Theta> {
    setup(family, m, n).map(|(t, _, _)| t)
}

/// The rational solution whose `ε = −1` poles are the roots characterised by
/// the family's oscillator, with its indices.
pub fn pole_solution(family: Family, m: i64, n: i64) -> Result<(Family, i64, i64)> {
    setup(family, m, n)?;
    Ok(match family {
        Family::HermiteI => (family, m, n),
        Family::HermiteII => (family, m, n - 1),
        _ => (family, m - 1, n),
    })
}

/// Result of a successful solvability check at `a`.
#[derive(Clone, Debug)]
pub struct QesCertificate {
    pub family: Family,
    pub m: i64,
    pub n: i64,
    pub a: Complex,
    pub b: Complex,
    /// Coefficients of `p`, `p_0 = 1`.
    pub p_coeffs: Vec<Complex>,
    /// Coefficients of `q` (HIII only).
    pub q_coeffs: Option<Vec<Complex>>,
    /// Relative size of the leftover equation at the chosen `b`.
    pub residual: f64,
    /// Distance between the `b` values recovered from the two conditions.
    pub b_consistency: f64,
    pub prec: u32,
}

impl QesCertificate {
    pub fn oscillator(&self) -> OscillatorSpec {
        OscillatorSpec { a: self.a.clone(), b: self.b.clone(), theta: oscillator_theta(self.family, self.m, self.n).expect("validated") }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "m": self.m,
            "n": self.n,
            "a": complex_to_string(&self.a),
            "b": complex_to_string(&self.b),
            "residual": self.residual,
            "b_consistency": self.b_consistency,
            "p_coeffs": self.p_coeffs.iter().map(complex_to_string).collect::<Vec<_>>(),
            "q_coeffs": self.q_coeffs.as_ref().map(|q| q.iter().map(complex_to_string).collect::<Vec<_>>()),
        })
    }
}

/// The closing equations of both conditions at `a`.
struct Conditions {
    main_p: Vec<BPoly>,
    main: BPoly,
    second_p: Vec<BPoly>,
    second: BPoly,
}

fn conditions(family: Family, m: i64, n: i64, a: &Complex, prec: u32) -> Result<Conditions> {
    let (_, main, second) = setup(family, m, n)?;
    let (main_p, main_c) = main.run(a, prec)?;
    let (second_p, second_c) = second.run(a, prec)?;
    Ok(Conditions { main_p, main: main_c, second_p, second: second_c })
}

/// Best common root of the two conditions: roots of the lower-degree one,
/// scored by the other. Returns `(b, residual, consistency)`.
fn best_b(cond: &Conditions, prec: u32) -> Result<(Complex, f64, f64)> {
    let (small, other) = if cond.main.len() <= cond.second.len() { (&cond.main, &cond.second) } else { (&cond.second, &cond.main) };
    let roots = find_roots_complex(small, prec)?;
    let (b, residual) = roots
        .roots
        .iter()
        .map(|r| (r.clone(), normalised(other, r)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| OscillatorError::SingularSystem("closing equation is constant in b".into()))?;
    let consistency = match find_roots_complex(other, prec) {
        Ok(set) => set.roots.iter().map(|r| abs_f64(&Complex::with_val(prec, r - &b))).fold(f64::INFINITY, f64::min),
        Err(_) => f64::INFINITY,
    };
    Ok((Complex::with_val(prec, b), residual, consistency))
}

/// Default acceptance threshold for a certificate at `prec` bits.
pub fn default_tolerance(prec: u32) -> f64 {
    1e-20 * 2f64.powi(256 - prec.min(1000) as i32).min(1.0)
}

/// The scalar solvability function: relative size of the leftover closing
/// equation at the best common `b`. Vanishes exactly at the roots.
pub fn qes_residual(family: Family, m: i64, n: i64, a: &Complex, prec: u32) -> Result<f64> {
    let a = Complex::with_val(prec, a);
    best_b(&conditions(family, m, n, &a, prec)?, prec).map(|(_, r, _)| r)
}

/// Checks whether `z = a` is a root of `H_{m,n}` through the family's
/// oscillator. `tol` bounds the relative residual of the leftover equation.
pub fn qes_solve(family: Family, m: i64, n: i64, a: &Complex, tol: f64, prec: u32) -> Result<QesCertificate> {
    let a = Complex::with_val(prec, a);
    let cond = conditions(family, m, n, &a, prec)?;
    let (b, residual, b_consistency) = best_b(&cond, prec)?;
    if residual.is_nan() || residual > tol {
        return Err(OscillatorError::NotARoot { residual });
    }
    let coeffs = |ps: &[BPoly]| -> Vec<Complex> { ps.iter().map(|p| eval(p, &b)).collect() };
    let p_coeffs = coeffs(&cond.main_p);
    let q_coeffs = (family == Family::HermiteIII).then(|| coeffs(&cond.second_p));
    for c in std::iter::once(&p_coeffs).chain(q_coeffs.as_ref()) {
        if c.last().is_some_and(|l| l.is_zero()) {
            return Err(OscillatorError::SingularSystem("polynomial factor has lower degree than expected".into()));
        }
    }
    Ok(QesCertificate { family, m, n, a, b, p_coeffs, q_coeffs, residual, b_consistency, prec })
}

/// Both closing equations at `(a, b)`.
fn residual_pair(family: Family, m: i64, n: i64, a: &Complex, b: &Complex, prec: u32) -> Result<(Complex, Complex, Complex, Complex)> {
    let c = conditions(family, m, n, a, prec)?;
    let (f1, d1) = eval_with_derivative(&c.main, b);
    let (f2, d2) = eval_with_derivative(&c.second, b);
    Ok((f1, d1, f2, d2))
}

/// Certified roots and the seeds that failed, each with its seed.
pub type QesSweep = (Vec<(Complex, QesCertificate)>, Vec<(Complex, OscillatorError)>);

/// Newton on `(a, b)` for the pair of closing equations, from each seed;
/// converged points are deduplicated and certified with [`qes_solve`].
/// Seeds that fail are reported alongside.
pub fn roots_via_qes(
    family: Family,
    m: i64,
    n: i64,
    seeds: &[Complex],
    tol: f64,
    prec: u32,
) -> Result<QesSweep> {
    setup(family, m, n)?;
    let mut found: Vec<(Complex, QesCertificate)> = Vec::new();
    let mut failed = Vec::new();
    for seed in seeds {
        match newton_ab(family, m, n, seed, prec).and_then(|a| qes_solve(family, m, n, &a, tol, prec)) {
            Ok(cert) => {
                let dup = found.iter().any(|(z, _)| {
                    abs_f64(&Complex::with_val(prec, z - &cert.a)) <= 1e-20 * (1.0 + abs_f64(z))
                });
                if !dup {
                    found.push((cert.a.clone(), cert));
                }
            }
            Err(e) => failed.push((seed.clone(), e)),
        }
    }
    Ok((found, failed))
}

fn newton_ab(family: Family, m: i64, n: i64, seed: &Complex, prec: u32) -> Result<Complex> {
    let mut a = Complex::with_val(prec, seed);
    let (mut b, _, _) = best_b(&conditions(family, m, n, &a, prec)?, prec)?;
    let tiny = 2f64.powi(-(prec as i32) / 2 + 8);
    let mut settled = 0;
    for _ in 0..200 {
        let h = Complex::with_val(prec, Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 4)) * (1.0 + abs_f64(&a)));
        let (f1, d1b, f2, d2b) = residual_pair(family, m, n, &a, &b, prec)?;
        let ap = Complex::with_val(prec, &a + &h);
        let am = Complex::with_val(prec, &a - &h);
        let (p1, _, p2, _) = residual_pair(family, m, n, &ap, &b, prec)?;
        let (m1, _, m2, _) = residual_pair(family, m, n, &am, &b, prec)?;
        let two_h = Complex::with_val(prec, &h * 2u32);
        let d1a = (p1 - m1) / &two_h;
        let d2a = (p2 - m2) / &two_h;
        let det = Complex::with_val(prec, &d1a * &d2b) - Complex::with_val(prec, &d1b * &d2a);
        if det.is_zero() {
            return Err(OscillatorError::SingularSystem("Jacobian vanishes".into()));
        }
        let da = (Complex::with_val(prec, &f1 * &d2b) - Complex::with_val(prec, &f2 * &d1b)) / &det;
        let db = (Complex::with_val(prec, &d1a * &f2) - Complex::with_val(prec, &d2a * &f1)) / &det;
        let size = abs_f64(&da);
        a -= da;
        b -= db;
        if !size.is_finite() {
            break;
        }
        if size <= tiny * (1.0 + abs_f64(&a)) {
            settled += 1;
            if settled >= 3 {
                return Ok(a);
            }
        }
    }
    Err(OscillatorError::Roots(RootError::NonConvergence { prec, sweeps: 200, unconverged: 1, overlaps: 0, uncertified: 0 }))
}

/// `E` in the no-log analysis; `None` stands for the limit `E → ∞`.
pub type Energy = Option<f64>;

/// The `n` values of `β̃` (and `β = β̃ √(1−α²)`) for which the rescaled
/// oscillator has an apparent singularity at the origin, sorted by
/// imaginary part so that entry `i` belongs to `j = −n+1+2i`.
#[derive(Clone, Debug, Serialize)]
pub struct NoLogBranch {
    pub n: u64,
    #[serde(serialize_with = "ser_complex")]
    pub alpha: Complex,
    pub energy: Energy,
    #[serde(serialize_with = "ser_complex_vec")]
    pub betas_scaled: Vec<Complex>,
    #[serde(serialize_with = "ser_complex_vec")]
    pub betas: Vec<Complex>,
}

fn ser_complex<S: serde::Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&complex_to_string(z))
}

fn ser_complex_vec<S: serde::Serializer>(v: &[Complex], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(complex_to_string))
}

impl NoLogBranch {
    pub fn j_values(&self) -> Vec<i64> {
        let n = self.n as i64;
        (0..n).map(|i| -n + 1 + 2 * i).collect()
    }

    /// Rows `n,alpha_re,alpha_im,E,j,re_beta,im_beta` (no header).
    pub fn csv_rows(&self) -> String {
        let e = self.energy.map_or("inf".to_string(), |e| format!("{e:?}"));
        self.j_values()
            .iter()
            .zip(&self.betas)
            .map(|(j, b)| {
                format!(
                    "{},{:?},{:?},{},{},{:?},{:?}\n",
                    self.n,
                    self.alpha.real().to_f64(),
                    self.alpha.imag().to_f64(),
                    e,
                    j,
                    b.real().to_f64(),
                    b.imag().to_f64()
                )
            })
            .collect()
    }
}

pub const NOLOG_CSV_HEADER: &str = "n,alpha_re,alpha_im,E,j,re_beta,im_beta\n";

/// The constraint polynomial in `β̃` from
/// `k(k−n)γ_k = −β̃γ_{k−1} − γ_{k−2} + c₁E⁻¹γ_{k−3} + c₂E⁻²γ_{k−4}`,
/// `c₁ = 2α(1−α²)^(−3/2)`, `c₂ = (1−α²)^(−2)`, closed at `k = n`.
pub fn no_log_polynomial(n: u64, alpha: &Complex, energy: Energy, prec: u32) -> Result<Vec<Complex>> {
    if n == 0 {
        return Err(OscillatorError::Domain("n must be positive".into()));
    }
    let one_minus = Complex::with_val(prec, 1 - Complex::with_val(prec, alpha.square_ref()));
    if one_minus.is_zero() {
        return Err(OscillatorError::Domain("α = ±1".into()));
    }
    let (c1, c2) = match energy {
        Some(e) if e > 0.0 && e.is_finite() => {
            let root = Complex::with_val(prec, one_minus.sqrt_ref());
            let c1 = Complex::with_val(prec, alpha * 2u32) / (Complex::with_val(prec, &one_minus * &root)) / e;
            let c2 = Complex::with_val(prec, one_minus.square_ref()).recip() / (e * e);
            (Some(c1), Some(c2))
        }
        Some(e) => return Err(OscillatorError::Domain(format!("E = {e} must be positive"))),
        None => (None, None),
    };
    let n = n as usize;
    let mut gamma: Vec<BPoly> = vec![vec![Complex::with_val(prec, 1)]];
    let rhs = |k: usize, gamma: &[BPoly]| -> BPoly {
        let get = |d: usize| k.checked_sub(d).map(|i| &gamma[i]);
        // −β̃ γ_{k−1}
        let mut out: BPoly = match get(1) {
            Some(g) => std::iter::once(Complex::new(prec)).chain(g.iter().map(|c| -Complex::with_val(prec, c))).collect(),
            None => vec![],
        };
        if let Some(g) = get(2) {
            out = p_add(&out, &p_scale(g, &Complex::with_val(prec, -1), prec), prec);
        }
        if let (Some(g), Some(c)) = (get(3), &c1) {
            out = p_add(&out, &p_scale(g, c, prec), prec);
        }
        if let (Some(g), Some(c)) = (get(4), &c2) {
            out = p_add(&out, &p_scale(g, c, prec), prec);
        }
        out
    };
    for k in 1..n {
        let factor = Complex::with_val(prec, (k as i64 * (k as i64 - n as i64)) as f64).recip();
        let next = p_scale(&rhs(k, &gamma), &factor, prec);
        gamma.push(next);
    }
    Ok(rhs(n, &gamma))
}

/// The no-log branches at `α`. At `E = ∞` the branches are exactly
/// `β̃ = ji`; this is confirmed by evaluating the constraint there.
pub fn no_log_betas(n: u64, alpha: &Complex, energy: Energy, prec: u32) -> Result<NoLogBranch> {
    let poly = no_log_polynomial(n, alpha, energy, prec)?;
    let root = Complex::with_val(prec, 1 - Complex::with_val(prec, alpha.square_ref())).sqrt();
    let scaled: Vec<Complex> = if energy.is_none() {
        let ni = n as i64;
        let exact: Vec<Complex> = (0..ni).map(|i| Complex::with_val(prec, (0, -ni + 1 + 2 * i))).collect();
        let scale = crate::numeric::max_abs_f64(&poly);
        for b in &exact {
            if abs_f64(&eval(&poly, b)) > 1e-30 * scale.max(1.0) {
                return Err(OscillatorError::SingularSystem(format!("β̃ = {} fails the E = ∞ constraint", complex_to_string(b))));
            }
        }
        exact
    } else {
        let mut roots = find_roots_complex(&poly, prec)?.roots;
        roots.sort_by(|x, y| x.imag().to_f64().total_cmp(&y.imag().to_f64()));
        roots.into_iter().map(|r| Complex::with_val(prec, r)).collect()
    };
    let betas = scaled.iter().map(|b| Complex::with_val(prec, b * &root)).collect();
    Ok(NoLogBranch { n, alpha: Complex::with_val(prec, alpha), energy, betas_scaled: scaled, betas })
}
