//! Invariant suites over index ranges, each producing a machine-readable
//! verdict. These back the `verify` command and the acceptance tests.

use std::fmt;

use rug::{Complex, Float};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{rescale_roots, semicircle_compare};
use crate::exact_poly::{expected_degree, okamoto_degree, poly_gcd, ExactPoly, HermiteOrder, PolyFamily, PolyTable, QSqrt2, Ring};
use crate::numeric::abs_f64;
use crate::oscillator::{no_log_betas, pole_solution, qes_residual, qes_solve, roots_via_qes};
use crate::rational_pw::{apply_backlund, backlund, build_rational, laurent_at, piv_residual, Family, RationalError};
use crate::rootfind::{count_real_roots, find_roots};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Recursions,
    Piv,
    Backlund,
    RealRoots,
    Qes,
    NoLog,
    Semicircle,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Recursions, Suite::Piv, Suite::Backlund, Suite::RealRoots, Suite::Qes, Suite::NoLog, Suite::Semicircle];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Recursions => "recursions",
            Suite::Piv => "piv",
            Suite::Backlund => "backlund",
            Suite::RealRoots => "realroots",
            Suite::Qes => "qes",
            Suite::NoLog => "nolog",
            Suite::Semicircle => "semicircle",
        })
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| format!("unknown suite {s:?} (expected one of recursions, piv, backlund, realroots, qes, nolog, semicircle)"))
    }
}

/// One invariant: how many cases were tried and which failed.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
    pub detail: Value,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.to_string(), passed: true, cases: 0, failures: Vec::new(), detail: Value::Null }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.record(false, || what);
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        SuiteReport { suite, passed: checks.iter().all(|c| c.passed), checks }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

/// Index limits for the suites. Defaults are the acceptance ranges.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Caps {
    /// Hermite indices `0..=max_index` (structure, P_IV, Bäcklund, QES).
    pub max_index: i64,
    /// Okamoto indices `|m|, |n| ≤ okamoto_index` in the structure suite.
    pub okamoto_index: i64,
    pub max_m: i64,
    pub max_n: i64,
    pub prec: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_index: 10, okamoto_index: 5, max_m: 12, max_n: 6, prec: 256 }
    }
}

pub fn run_suite(suite: Suite, caps: &Caps) -> SuiteReport {
    match suite {
        Suite::Recursions => recursions(caps.max_index, caps.okamoto_index),
        Suite::Piv => piv(caps.max_index),
        Suite::Backlund => backlund_suite(caps.max_index),
        Suite::RealRoots => realroots(caps.max_m, caps.max_n),
        Suite::Qes => qes(caps.max_index, caps.prec),
        Suite::NoLog => nolog(caps.prec),
        Suite::Semicircle => semicircle(60, 4, -0.5, 0.5, caps.prec),
    }
}

/// `p(iz) = i^d q(z)` coefficientwise: `p_k = i^(d−k) q_k`.
fn i_symmetric<R: Ring>(p: &[R], q: &[R], d: usize) -> bool {
    let zero = R::zero();
    (0..p.len().max(q.len())).all(|k| {
        let a = p.get(k).unwrap_or(&zero);
        let b = q.get(k).unwrap_or(&zero);
        if k > d || (d - k) % 2 == 1 {
            a.is_zero() && b.is_zero()
        } else if ((d - k) / 2).is_multiple_of(2) {
            a == b
        } else {
            *a == b.neg()
        }
    })
}

fn is_constant_gcd(a: &ExactPoly, b: &ExactPoly) -> bool {
    poly_gcd(a, b).map(|g| g.poly.degree() == Some(0)).unwrap_or(false)
}

fn derivative(p: &ExactPoly) -> ExactPoly {
    ExactPoly::new(p.poly.derivative(), p.scale.clone())
}

/// Degrees, integrality, the `iz` symmetry, simple roots and disjointness of
/// neighbouring members, for Hermite `0 ≤ m, n ≤ max_index` and Okamoto
/// `|m|, |n| ≤ okamoto_index`.
pub fn recursions(max_index: i64, okamoto_index: i64) -> SuiteReport {
    let table = PolyTable::global();
    let mut degree = Check::new("hermite degree = mn");
    let mut monic = Check::new("hermite monic integer in z/2");
    let mut sym = Check::new("hermite H_{m,n}(iz) = i^(mn) H_{n,m}(z)");
    let mut simple = Check::new("hermite gcd(H, H') constant");
    let mut disjoint = Check::new("hermite gcd with H_{m+1,n}, H_{m,n+1}, H_{m-1,n+1} constant");
    let mut orders = Check::new("hermite traversal orders agree");
    let half = QSqrt2::rational(rug::Rational::from((1, 2)));
    for m in 0..=max_index {
        for n in 0..=max_index {
            let tag = || format!("H_{{{m},{n}}}");
            let h = match table.hermite(m, n) {
                Ok(h) => h,
                Err(e) => {
                    degree.fail(format!("{}: {e}", tag()));
                    continue;
                }
            };
            degree.record(h.degree() == Some((m * n) as usize), tag);
            monic.record(h.scale == half && h.poly.is_monic(), tag);
            let pair = (h.to_integer_poly(), table.hermite(n, m).ok().and_then(|t| t.to_integer_poly()));
            sym.record(matches!(&pair, (Some(p), Some(q)) if i_symmetric(p.coeffs(), q.coeffs(), (m * n) as usize)), tag);
            if m * n > 0 {
                simple.record(is_constant_gcd(&h, &derivative(&h)), tag);
            }
            for (a, b) in [(m + 1, n), (m, n + 1), (m - 1, n + 1)] {
                if a < 0 {
                    continue;
                }
                let ok = table.hermite(a, b).map(|x| is_constant_gcd(&h, &x)).unwrap_or(false);
                disjoint.record(ok, || format!("{} vs H_{{{a},{b}}}", tag()));
            }
            if m <= 8 && n <= 8 {
                let same = match (
                    table.hermite_uncached(m, n, HermiteOrder::MFirst),
                    table.hermite_uncached(m, n, HermiteOrder::NFirst),
                ) {
                    (Ok(a), Ok(b)) => a.poly == b.poly && a.poly == h.poly,
                    _ => false,
                };
                orders.record(same, tag);
            }
        }
    }

    let mut q_degree = Check::new("okamoto degree = m²+n²+mn−m−n, monic");
    let mut q_shift = Check::new("okamoto Q_{m,n} = Q_{−m−n+1,m}");
    let mut q_sym = Check::new("okamoto Q_{m,n}(iz) = i^d Q_{n,m}(z)");
    let mut q_simple = Check::new("okamoto gcd(Q, Q') constant");
    let mut q_disjoint = Check::new("okamoto gcd with Q_{m+1,n}, Q_{m,n+1}, Q_{m-1,n+1} constant");
    let r = okamoto_index;
    for m in -r..=r {
        for n in -r..=r {
            let tag = || format!("Q_{{{m},{n}}}");
            let q = match table.okamoto(m, n) {
                Ok(q) => q,
                Err(e) => {
                    q_degree.fail(format!("{}: {e}", tag()));
                    continue;
                }
            };
            let d = okamoto_degree(m, n);
            q_degree.record(q.degree() == Some(d as usize) && q.poly.is_monic(), tag);
            q_shift.record(table.okamoto(-m - n + 1, m).map(|o| o.poly == q.poly).unwrap_or(false), tag);
            let ok = table
                .okamoto(n, m)
                .map(|o| i_symmetric(q.to_sqrt2_poly().coeffs(), o.to_sqrt2_poly().coeffs(), d as usize))
                .unwrap_or(false);
            q_sym.record(ok, tag);
            if d > 0 {
                q_simple.record(is_constant_gcd(&q, &derivative(&q)), tag);
            }
            for (a, b) in [(m + 1, n), (m, n + 1), (m - 1, n + 1)] {
                let ok = table.okamoto(a, b).map(|x| is_constant_gcd(&q, &x)).unwrap_or(false);
                q_disjoint.record(ok, || format!("{} vs Q_{{{a},{b}}}", tag()));
            }
        }
    }
    debug_assert_eq!(expected_degree(PolyFamily::Okamoto, 2, 2), 8);
    SuiteReport::new(
        Suite::Recursions,
        vec![degree, monic, sym, simple, disjoint, orders, q_degree, q_shift, q_sym, q_simple, q_disjoint],
    )
}

fn family_range(family: Family, max_index: i64) -> std::ops::RangeInclusive<i64> {
    if family.is_hermite() {
        0..=max_index
    } else {
        -max_index..=max_index
    }
}

/// The P_IV residual of every family member with indices up to `max_index`
/// (Okamoto: `|m|, |n| ≤ max_index`) is the zero polynomial.
pub fn piv(max_index: i64) -> SuiteReport {
    let checks = Family::ALL
        .into_iter()
        .map(|family| {
            let mut c = Check::new(&format!("{family} residual identically zero"));
            // with ω ≡ 0 the cleared equation reduces to 16θ₀²B⁴ = 0
            let mut trivial = Vec::new();
            for m in family_range(family, max_index) {
                for n in family_range(family, max_index) {
                    let sol = match build_rational(family, m, n) {
                        Ok(s) => s,
                        Err(e) => {
                            c.fail(format!("({m}, {n}): {e}"));
                            continue;
                        }
                    };
                    match piv_residual(&sol) {
                        Ok(r) => c.record(r.is_zero(), || format!("({m}, {n})")),
                        Err(RationalError::OmegaIdenticallyZero) => {
                            trivial.push((m, n));
                            c.record(sol.theta.theta0 == 0, || format!("({m}, {n}): ω ≡ 0 with θ₀ ≠ 0"));
                        }
                        Err(e) => c.fail(format!("({m}, {n}): {e}")),
                    }
                }
            }
            c.with_detail(json!({ "omega_identically_zero": trivial }))
        })
        .collect();
    SuiteReport::new(Suite::Piv, checks)
}

/// Members on which the composition laws are checked: far enough from the
/// family boundary that every intermediate image is a nonzero member.
const COMPOSITION_SAMPLES: [(Family, i64, i64); 14] = [
    (Family::HermiteI, 1, 2),
    (Family::HermiteI, 2, 2),
    (Family::HermiteI, 1, 3),
    (Family::HermiteI, 3, 2),
    (Family::HermiteII, 2, 1),
    (Family::HermiteII, 2, 2),
    (Family::HermiteII, 3, 1),
    (Family::HermiteIII, 1, 1),
    (Family::HermiteIII, 2, 1),
    (Family::HermiteIII, 1, 2),
    (Family::HermiteIII, 2, 2),
    (Family::Okamoto, 0, 1),
    (Family::Okamoto, 1, 1),
    (Family::Okamoto, -1, 2),
];

/// Table of transform actions for indices up to `max_index`, plus
/// `R1R2 = R2R1 = R3R4 = R4R3 = I` and `R1R3 = R3R1` on sample members.
pub fn backlund_suite(max_index: i64) -> SuiteReport {
    let mut table = Check::new("transform images equal the tabulated members");
    let mut degenerate = 0usize;
    for family in Family::ALL {
        for m in family_range(family, max_index) {
            for n in family_range(family, max_index) {
                let Ok(sol) = build_rational(family, m, n) else {
                    table.fail(format!("{family}({m}, {n}) not constructible"));
                    continue;
                };
                for i in 1..=4u8 {
                    match backlund(i, &sol) {
                        Ok(_) => table.record(true, String::new),
                        Err(RationalError::DegenerateTransform { .. }) => degenerate += 1,
                        Err(e) => table.fail(format!("R{i} {family}({m}, {n}): {e}")),
                    }
                }
            }
        }
    }
    let table = table.with_detail(json!({ "degenerate_skipped": degenerate }));

    let mut inverse = Check::new("R1R2 = R2R1 = R3R4 = R4R3 = identity");
    let mut commute = Check::new("R1R3 = R3R1");
    for (family, m, n) in COMPOSITION_SAMPLES {
        let tag = || format!("{family}({m}, {n})");
        let Ok(sol) = build_rational(family, m, n) else {
            inverse.fail(format!("{} not constructible", tag()));
            continue;
        };
        let omega = sol.omega_sqrt2();
        let compose = |first: u8, second: u8| {
            let (w, t) = apply_backlund(first, &omega, &sol.theta).ok()??;
            apply_backlund(second, &w, &t).ok()?
        };
        for (a, b) in [(1, 2), (2, 1), (3, 4), (4, 3)] {
            let ok = compose(a, b).is_some_and(|(w, t)| w == omega && t == sol.theta);
            inverse.record(ok, || format!("R{b}R{a} on {}", tag()));
        }
        let ok = matches!((compose(1, 3), compose(3, 1)), (Some(x), Some(y)) if x == y);
        commute.record(ok, tag);
    }
    SuiteReport::new(Suite::Backlund, vec![table, inverse, commute])
}

/// Sturm counts of real roots of `H_{m,n}`: `m` for odd `n`, none for even.
pub fn realroots(max_m: i64, max_n: i64) -> SuiteReport {
    let mut c = Check::new("real roots of H_{m,n}: m if n odd, 0 if n even");
    for m in 1..=max_m {
        for n in 1..=max_n {
            let expect = if n % 2 == 1 { m as usize } else { 0 };
            match PolyTable::global().hermite(m, n) {
                Ok(h) => {
                    let got = count_real_roots(&h);
                    c.record(got == expect, || format!("H_{{{m},{n}}}: {got} real roots, expected {expect}"));
                }
                Err(e) => c.fail(format!("H_{{{m},{n}}}: {e}")),
            }
        }
    }
    SuiteReport::new(Suite::RealRoots, vec![c])
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    abs_f64(&Complex::with_val(a.prec().0.max(b.prec().0), a - b))
}

/// Seeds for the QES Newton iteration: roots rounded to three decimals.
fn rounded_seeds(roots: &[Complex], prec: u32) -> Vec<Complex> {
    roots
        .iter()
        .map(|z| {
            let r = |x: f64| (x * 1e3).round() / 1e3;
            Complex::with_val(prec, (r(z.real().to_f64()) + 1e-4, r(z.imag().to_f64())))
        })
        .collect()
}

/// Oscillator characterisation of the roots of `H_{m,n}` for the three
/// Hermite families, `1 ≤ m, n ≤ max_index`.
pub fn qes(max_index: i64, prec: u32) -> SuiteReport {
    const TOL: f64 = 1e-20;
    let mut at_roots = Check::new("residual ≤ 1e-20 at every root");
    let mut midpoints = Check::new("residual ≥ 1e-5 between neighbouring roots");
    let mut newton = Check::new("Newton from rounded roots recovers all roots to 1e-10");
    let mut linkage = Check::new("b equals the pole expansion coefficient to 1e-10");
    let mut worst = (0f64, f64::INFINITY, 0f64, 0f64);
    for family in [Family::HermiteI, Family::HermiteII, Family::HermiteIII] {
        for m in 1..=max_index {
            for n in 1..=max_index {
                let tag = |what: &str| format!("{family}({m}, {n}) {what}");
                let roots = match PolyTable::global().hermite(m, n).map_err(|e| e.to_string()).and_then(|h| find_roots(&h, prec).map_err(|e| e.to_string())) {
                    Ok(r) => r.roots,
                    Err(e) => {
                        at_roots.fail(tag(&e));
                        continue;
                    }
                };
                let sol = pole_solution(family, m, n).map_err(|e| e.to_string()).and_then(|(f, a, b)| build_rational(f, a, b).map_err(|e| e.to_string()));
                for (i, z) in roots.iter().enumerate() {
                    match qes_solve(family, m, n, z, TOL, prec) {
                        Ok(cert) => {
                            worst.0 = worst.0.max(cert.residual);
                            at_roots.record(true, String::new);
                            let lau = sol.as_ref().map_err(Clone::clone).and_then(|s| laurent_at(s, z, &Float::new(prec), 4, prec).map_err(|e| e.to_string()));
                            match lau {
                                Ok(l) => {
                                    let d = dist(&l.b, &cert.b);
                                    worst.2 = worst.2.max(d);
                                    linkage.record(l.eps == -1 && d < 1e-10, || tag(&format!("root {i}: |Δb| = {d:e}")));
                                }
                                Err(e) => linkage.fail(tag(&e)),
                            }
                        }
                        Err(e) => at_roots.fail(tag(&format!("root {i}: {e}"))),
                    }
                    let nearest = roots.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, w)| w).min_by(|x, y| dist(z, x).total_cmp(&dist(z, y)));
                    if let Some(w) = nearest {
                        let mid = Complex::with_val(prec, z + w) / 2u32;
                        match qes_residual(family, m, n, &mid, prec) {
                            Ok(r) => {
                                worst.1 = worst.1.min(r);
                                midpoints.record(r >= 1e-5, || tag(&format!("midpoint by root {i}: {r:e}")));
                            }
                            Err(e) => midpoints.fail(tag(&e.to_string())),
                        }
                    }
                }
                match roots_via_qes(family, m, n, &rounded_seeds(&roots, prec), TOL, prec) {
                    Ok((found, failed)) => {
                        let far = found.iter().map(|(a, _)| roots.iter().map(|z| dist(a, z)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
                        worst.3 = worst.3.max(far);
                        let ok = failed.is_empty() && found.len() == roots.len() && far < 1e-10;
                        newton.record(ok, || tag(&format!("{} found, {} failed, worst {far:e}", found.len(), failed.len())));
                    }
                    Err(e) => newton.fail(tag(&e.to_string())),
                }
            }
        }
    }
    let at_roots = at_roots.with_detail(json!({ "max_residual": worst.0 }));
    let midpoints = midpoints.with_detail(json!({ "min_residual": worst.1 }));
    let linkage = linkage.with_detail(json!({ "max_b_difference": worst.2 }));
    let newton = newton.with_detail(json!({ "max_distance": worst.3 }));
    SuiteReport::new(Suite::Qes, vec![at_roots, midpoints, newton, linkage])
}

/// `|β_j − ji√(1−α²)|·E` for `α = 0.3`, `n = 3`, `E ∈ {100, 200, 400}`, with
/// consecutive ratios in `[0.3, 3]`, and exact limits at `E = ∞`.
pub fn nolog(prec: u32) -> SuiteReport {
    let alpha = Complex::with_val(prec, 0.3);
    let s = Float::with_val(prec, 1 - Float::with_val(prec, 0.09)).sqrt();
    let mut bounded = Check::new("E·|β_j − ji√(1−α²)| bounded over E = 100, 200, 400");
    let mut scaled = Vec::new();
    for e in [100.0, 200.0, 400.0] {
        match no_log_betas(3, &alpha, Some(e), prec) {
            Ok(branch) => scaled.push(
                branch
                    .betas
                    .iter()
                    .zip(branch.j_values())
                    .map(|(b, j)| dist(b, &Complex::with_val(prec, (0, Float::with_val(prec, &s * j)))) * e)
                    .collect::<Vec<f64>>(),
            ),
            Err(err) => bounded.fail(format!("E = {e}: {err}")),
        }
    }
    for w in scaled.windows(2) {
        for (j, (x, y)) in w[0].iter().zip(&w[1]).enumerate() {
            let ratio = y / x;
            bounded.record((0.3..=3.0).contains(&ratio), || format!("branch {j}: ratio {ratio}"));
        }
    }
    let bounded = bounded.with_detail(json!({ "scaled_deviation": scaled }));

    let mut exact = Check::new("E = ∞ branches are exactly ji");
    for n in 1..=6u64 {
        match no_log_betas(n, &alpha, None, prec) {
            Ok(branch) => {
                let ok = branch.betas_scaled.iter().zip(branch.j_values()).all(|(b, j)| *b == Complex::with_val(prec, (0, j)));
                exact.record(ok, || format!("n = {n}"));
            }
            Err(err) => exact.fail(format!("n = {n}: {err}")),
        }
    }
    SuiteReport::new(Suite::NoLog, vec![bounded, exact])
}

/// Fraction of rescaled roots of `H_{m,n}` with real part in `[a, b]`
/// against the semicircle law, within 5%.
pub fn semicircle(m: u64, n: u64, a: f64, b: f64, prec: u32) -> SuiteReport {
    let mut c = Check::new("empirical count within 5% of the semicircle integral");
    let result = PolyTable::global()
        .hermite(m as i64, n as i64)
        .map_err(|e| e.to_string())
        .and_then(|h| find_roots(&h, prec).map_err(|e| e.to_string()))
        .and_then(|r| semicircle_compare(&rescale_roots(&r, 2 * m + n), a, b, n).map_err(|e| e.to_string()));
    match result {
        Ok((emp, pred)) => {
            let rel = (emp - pred).abs() / pred;
            c.record(rel <= 0.05, || format!("relative difference {rel}"));
            c = c.with_detail(json!({ "m": m, "n": n, "interval": [a, b], "empirical": emp, "predicted": pred, "relative": rel }));
        }
        Err(e) => c.fail(e),
    }
    SuiteReport::new(Suite::Semicircle, vec![c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    #[test]
    fn symmetry_helper() {
        // H_{2,1} = 4z² − 2, H_{1,2} = 4z² + 2
        let p = [Integer::from(-2), Integer::from(0), Integer::from(4)];
        let q = [Integer::from(2), Integer::from(0), Integer::from(4)];
        assert!(i_symmetric(&p, &q, 2));
        assert!(!i_symmetric(&p, &p, 2));
    }

    #[test]
    fn small_suites_pass() {
        for r in [recursions(3, 2), piv(2), backlund_suite(2), realroots(4, 3), nolog(256)] {
            assert!(r.passed, "{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
