use piv_core::exact_poly::PolyTable;
use piv_core::numeric::abs_f64;
use piv_core::oscillator::{no_log_betas, pole_solution, qes_residual, qes_solve, roots_via_qes, OscillatorError};
use piv_core::rational_pw::{build_rational, laurent_at, Family};
use piv_core::rootfind::find_roots;
use rug::{Complex, Float};

const P: u32 = 256;
const FAMILIES: [Family; 3] = [Family::HermiteI, Family::HermiteII, Family::HermiteIII];

fn roots(m: i64, n: i64) -> Vec<Complex> {
    let h = PolyTable::global().hermite(m, n).unwrap();
    find_roots(&h, P).unwrap().roots
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    abs_f64(&Complex::with_val(P, a - b))
}

// seeds a few digits away from the exact roots
fn seeds(rs: &[Complex]) -> Vec<Complex> {
    rs.iter()
        .map(|z| {
            let (re, im) = (z.real().to_f64(), z.imag().to_f64());
            Complex::with_val(P, ((re * 1e3).round() / 1e3 + 1e-4, (im * 1e3).round() / 1e3))
        })
        .collect()
}

#[test]
fn residual_vanishes_exactly_at_roots() {
    for family in FAMILIES {
        for m in 1..=5 {
            for n in 1..=5 {
                let rs = roots(m, n);
                for (i, z) in rs.iter().enumerate() {
                    let cert = qes_solve(family, m, n, z, 1e-20, P).unwrap_or_else(|e| panic!("{family:?} {m} {n}: {e}"));
                    assert!(cert.residual <= 1e-20);
                    let Some(other) = rs.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, w)| w).min_by(|x, y| dist(z, x).total_cmp(&dist(z, y))) else {
                        continue;
                    };
                    let mid = Complex::with_val(P, z + other) / 2u32;
                    let off = qes_residual(family, m, n, &mid, P).unwrap();
                    assert!(off >= 1e-5, "{family:?} {m} {n}: residual {off} at midpoint");
                }
            }
        }
    }
}

#[test]
fn newton_recovers_every_root() {
    for family in FAMILIES {
        for m in 1..=5 {
            for n in 1..=5 {
                let rs = roots(m, n);
                let (found, failed) = roots_via_qes(family, m, n, &seeds(&rs), 1e-20, P).unwrap();
                assert!(failed.is_empty(), "{family:?} {m} {n}: {failed:?}");
                assert_eq!(found.len(), rs.len());
                for (a, _) in &found {
                    let near = rs.iter().map(|z| dist(a, z)).fold(f64::INFINITY, f64::min);
                    assert!(near < 1e-10, "{family:?} {m} {n}: {near}");
                }
            }
        }
    }
}

#[test]
fn b_matches_the_pole_expansion() {
    for family in FAMILIES {
        for m in 1..=5 {
            for n in 1..=5 {
                let (pf, pm, pn) = pole_solution(family, m, n).unwrap();
                let sol = build_rational(pf, pm, pn).unwrap();
                for z in roots(m, n) {
                    let cert = qes_solve(family, m, n, &z, 1e-20, P).unwrap();
                    let lau = laurent_at(&sol, &z, &Float::new(P), 4, P).unwrap();
                    assert_eq!(lau.eps, -1);
                    assert!(dist(&lau.b, &cert.b) < 1e-10, "{family:?} {m} {n}");
                    if family == Family::HermiteIII {
                        assert!(cert.b_consistency < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn polynomial_factors_have_expected_shape() {
    for z in roots(2, 2) {
        let cert = qes_solve(Family::HermiteIII, 2, 2, &z, 1e-20, P).unwrap();
        let q = cert.q_coeffs.as_ref().unwrap();
        assert_eq!((cert.p_coeffs.len(), q.len()), (2, 2));
        assert!(!cert.p_coeffs[0].is_zero() && !q[0].is_zero());
    }
    for z in roots(4, 3) {
        let cert = qes_solve(Family::HermiteI, 4, 3, &z, 1e-20, P).unwrap();
        assert_eq!(cert.p_coeffs.len(), 4);
        assert!(!cert.p_coeffs[0].is_zero());
        let ps = piv_core::rootfind::find_roots_complex(&cert.p_coeffs, P).unwrap();
        for i in 0..ps.len() {
            for k in i + 1..ps.len() {
                let gap = dist(&ps.roots[i], &ps.roots[k]);
                assert!(gap > ps.radii[i].to_f64() + ps.radii[k].to_f64());
            }
        }
    }
}

#[test]
fn out_of_range_is_rejected() {
    let z = Complex::with_val(P, 0);
    assert!(matches!(qes_solve(Family::HermiteII, 1, 0, &z, 1e-20, P), Err(OscillatorError::InvalidIndex { .. })));
}

#[test]
fn no_log_branches_follow_the_limit() {
    let alpha = Complex::with_val(P, 0.3);
    let s = (1.0f64 - 0.09).sqrt();
    let mut scaled = Vec::new();
    for e in [100.0, 200.0, 400.0] {
        let branch = no_log_betas(3, &alpha, Some(e), P).unwrap();
        let dev: Vec<f64> = branch
            .betas
            .iter()
            .zip(branch.j_values())
            .map(|(b, j)| dist(b, &Complex::with_val(P, (0.0, j as f64 * s))) * e)
            .collect();
        scaled.push(dev);
    }
    for w in scaled.windows(2) {
        for (x, y) in w[0].iter().zip(&w[1]) {
            let ratio = y / x;
            assert!((0.3..=3.0).contains(&ratio), "ratio {ratio}");
        }
    }
}

#[test]
fn no_log_branches_do_not_collide() {
    // walk α along the real segment and across the strip
    let mut prev: Option<Vec<Complex>> = None;
    for step in 0..=180 {
        let t = -0.9 + 0.01 * step as f64;
        let alpha = Complex::with_val(P, (t, 0.2 * (t * 3.0).sin()));
        let branch = no_log_betas(4, &alpha, Some(50.0), P).unwrap();
        let b = &branch.betas_scaled;
        let gap = (0..b.len()).flat_map(|i| (i + 1..b.len()).map(move |k| (i, k))).map(|(i, k)| dist(&b[i], &b[k])).fold(f64::INFINITY, f64::min);
        assert!(gap > 0.5, "{t} {gap}");
        if let Some(p) = &prev {
            for (x, y) in p.iter().zip(b) {
                assert!(dist(x, y) < 0.2, "{t} {}", dist(x, y));
            }
        }
        prev = Some(b.clone());
    }
}
