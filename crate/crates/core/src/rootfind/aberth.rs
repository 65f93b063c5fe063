//! Aberth–Ehrlich iteration, Newton polishing and disc certification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Round;
use rug::{Complex, Float, Integer};

use super::RootError;
use crate::exact_poly::Poly;
use crate::numeric::{abs_f64, eval_with_derivative};

/// Seed of the perturbation applied to the initial points.
pub const SEED: u64 = 0x5eed_4041;
const MAX_SWEEPS: usize = 600;

#[derive(Clone, Debug)]
pub struct AberthOutcome {
    pub roots: Vec<Complex>,
    pub sweeps: usize,
    pub unconverged: usize,
}

fn coeffs_at(p: &Poly<Integer>, prec: u32) -> Vec<Complex> {
    p.coeffs().iter().map(|c| Complex::with_val(prec, c)).collect()
}

fn rounded(coeffs: &[Complex], prec: u32) -> Vec<Complex> {
    coeffs.iter().map(|c| Complex::with_val(prec, c)).collect()
}

/// `Σ|c_k| |z|^k` and `Σ k|c_k| |z|^(k−1)` at low precision, rounded up.
fn magnitude_sums(abs_coeffs: &[Float], z: &Complex) -> (Float, Float) {
    let prec = 64;
    let r = Float::with_val_round(prec, z.abs_ref(), Round::Up).0;
    let mut s0 = Float::new(prec);
    let mut s1 = Float::new(prec);
    for c in abs_coeffs.iter().rev() {
        s1 = Float::with_val_round(prec, &s1 * &r, Round::Up).0;
        s1 = Float::with_val_round(prec, &s1 + &s0, Round::Up).0;
        s0 = Float::with_val_round(prec, &s0 * &r, Round::Up).0;
        s0 = Float::with_val_round(prec, &s0 + c, Round::Up).0;
    }
    (s0, s1)
}

fn abs_coeffs(coeffs: &[Complex]) -> Vec<Float> {
    coeffs.iter().map(|c| Float::with_val_round(64, c.abs_ref(), Round::Up).0).collect()
}

/// Starting points on circles read off the upper convex hull of
/// `(k, ln|c_k|)`: an edge from `k₀` to `k₁` contributes `k₁ − k₀` points on
/// the circle of radius `(|c_k₀|/|c_k₁|)^(1/(k₁−k₀))`, slightly jittered.
fn initial_points(c: &[Complex], prec: u32, seed: u64) -> Vec<Complex> {
    let d = c.len() - 1;
    let pts: Vec<(usize, f64)> = (0..=d)
        .filter(|&k| !c[k].is_zero())
        .map(|k| (k, Float::with_val(64, c[k].abs_ref()).ln().to_f64()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly above the chord a–q
            let cross = (b.0 as f64 - a.0 as f64) * (q.1 - a.1) - (b.1 - a.1) * (q.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(d);
    // a zero constant term means roots at the origin; seed them near it
    if pts[0].0 > 0 {
        for i in 0..pts[0].0 {
            let angle = std::f64::consts::TAU * (i as f64 + 0.3) / pts[0].0 as f64;
            out.push(Complex::with_val(prec, (1e-3 * angle.cos(), 1e-3 * angle.sin())));
        }
    }
    let mut offset = 0.0;
    for w in hull.windows(2) {
        let ((k0, l0), (k1, l1)) = (w[0], w[1]);
        let count = k1 - k0;
        let radius = ((l0 - l1) / count as f64).exp();
        for i in 0..count {
            let angle = std::f64::consts::TAU * (i as f64 + 0.25) / count as f64 + offset + rng.gen_range(-0.1..0.1) / count as f64;
            let rad = radius * (1.0 + rng.gen_range(-0.02..0.02));
            out.push(Complex::with_val(prec, (rad * angle.cos(), rad * angle.sin())));
        }
        offset += 0.7;
    }
    out
}

/// Simultaneous iteration for all roots of `p` at `prec` bits. The pair sums
/// `Σ 1/(z_k − z_j)` only scale the Newton quotient, so they are accumulated
/// in `f64`.
pub fn aberth(p: &Poly<Integer>, prec: u32) -> AberthOutcome {
    aberth_seeded(p, prec, SEED)
}

/// [`aberth`] with a different seed for the jitter of the starting points.
pub fn aberth_seeded(p: &Poly<Integer>, prec: u32, seed: u64) -> AberthOutcome {
    if p.degree().unwrap_or(0) == 0 {
        return AberthOutcome { roots: Vec::new(), sweeps: 0, unconverged: 0 };
    }
    aberth_complex_seeded(&coeffs_at(p, prec), prec, seed)
}

/// [`aberth`] for complex coefficients (lowest degree first, nonzero
/// leading coefficient).
pub fn aberth_complex(coeffs: &[Complex], prec: u32) -> AberthOutcome {
    aberth_complex_seeded(coeffs, prec, SEED)
}

fn aberth_complex_seeded(coeffs: &[Complex], prec: u32, seed: u64) -> AberthOutcome {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return AberthOutcome { roots: Vec::new(), sweeps: 0, unconverged: 0 };
    }
    let coeffs = rounded(coeffs, prec);
    if d == 1 {
        let root = -Complex::with_val(prec, &coeffs[0] / &coeffs[1]);
        return AberthOutcome { roots: vec![root], sweeps: 0, unconverged: 0 };
    }
    let magnitudes = abs_coeffs(&coeffs);
    let noise = 4.0 * (d as f64 + 1.0) * 2f64.powi(-(prec as i32));
    let step_tol = 2f64.powi(8 - prec as i32);

    let mut z = initial_points(&coeffs, prec, seed);
    let mut zf: Vec<(f64, f64)> = z.iter().map(|w| (w.real().to_f64(), w.imag().to_f64())).collect();
    let mut done = vec![false; d];
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && done.iter().any(|x| !x) {
        sweeps += 1;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (v, dv) = eval_with_derivative(&coeffs, &z[k]);
            let (s0, _) = magnitude_sums(&magnitudes, &z[k]);
            if Float::with_val(64, v.abs_ref()) <= Float::with_val(64, &s0 * noise) {
                done[k] = true;
                continue;
            }
            if dv.is_zero() {
                // nudge off a critical point
                z[k] += Complex::with_val(prec, (1e-3, 1e-3));
                continue;
            }
            let w = Complex::with_val(prec, &v / &dv);
            let (mut sr, mut si) = (0.0, 0.0);
            let (xr, xi) = zf[k];
            for (j, &(yr, yi)) in zf.iter().enumerate() {
                if j != k {
                    let (dr, di) = (xr - yr, xi - yi);
                    let n = dr * dr + di * di;
                    sr += dr / n;
                    si -= di / n;
                }
            }
            let (wr, wi) = (w.real().to_f64(), w.imag().to_f64());
            let (fr, fi) = (1.0 - (wr * sr - wi * si), -(wr * si + wi * sr));
            let step = if fr.is_finite() && fi.is_finite() && (fr != 0.0 || fi != 0.0) {
                w / Complex::with_val(prec, (fr, fi))
            } else {
                w
            };
            let small = abs_f64(&step) <= step_tol * (1.0 + abs_f64(&z[k]));
            z[k] -= step;
            zf[k] = (z[k].real().to_f64(), z[k].imag().to_f64());
            if small {
                done[k] = true;
            }
        }
    }
    let unconverged = done.iter().filter(|x| !**x).count();
    AberthOutcome { roots: z, sweeps, unconverged }
}

/// Newton-polish at `2·prec` bits and attach a radius to each root: by
/// `p'/p = Σ 1/(z − ζ)`, some root lies within `d·|p(z)|/|p'(z)|`, and the
/// evaluation errors are bounded by `4(d+1)u·Σ|c_k||z|^k` (and the analogue
/// for `p'`). Disjoint discs then hold exactly one root each.
pub fn certify(p: &Poly<Integer>, outcome: &AberthOutcome, prec: u32) -> Result<(Vec<Complex>, Vec<Float>), RootError> {
    certify_complex(&coeffs_at(p, 2 * prec), outcome, prec)
}

/// [`certify`] for complex coefficients. The radii refer to the polynomial
/// with exactly the given coefficients.
pub fn certify_complex(coeffs: &[Complex], outcome: &AberthOutcome, prec: u32) -> Result<(Vec<Complex>, Vec<Float>), RootError> {
    let d = coeffs.len().saturating_sub(1);
    let work = 2 * prec;
    let coeffs = rounded(coeffs, work);
    let magnitudes = abs_coeffs(&coeffs);
    let u = Float::with_val(64, Float::i_exp(1, -(work as i32)));
    let gamma = Float::with_val(64, &u * (4 * (d as u32 + 1)));
    let step_tol = 2f64.powi(8 - work as i32);

    let mut roots = Vec::with_capacity(d);
    let mut radii = Vec::with_capacity(d);
    let mut uncertified = 0;
    for z0 in &outcome.roots {
        let mut z = Complex::with_val(work, z0);
        for _ in 0..12 {
            let (v, dv) = eval_with_derivative(&coeffs, &z);
            if dv.is_zero() {
                break;
            }
            let step = Complex::with_val(work, &v / &dv);
            let small = abs_f64(&step) <= step_tol * (1.0 + abs_f64(&z));
            z -= step;
            if small {
                break;
            }
        }
        let (v, dv) = eval_with_derivative(&coeffs, &z);
        let (s0, s1) = magnitude_sums(&magnitudes, &z);
        let err0 = Float::with_val_round(64, &gamma * &s0, Round::Up).0;
        let err1 = Float::with_val_round(64, &gamma * &s1, Round::Up).0;
        let top = Float::with_val_round(64, v.abs_ref(), Round::Up).0 + &err0;
        let bottom = Float::with_val_round(64, dv.abs_ref(), Round::Down).0 - &err1;
        let radius = if bottom.is_sign_positive() && !bottom.is_zero() {
            let r = Float::with_val_round(64, &top / &bottom, Round::Up).0 * d as u32;
            r * (1.0 + 2f64.powi(-40))
        } else {
            uncertified += 1;
            Float::with_val(64, f64::INFINITY)
        };
        roots.push(z);
        radii.push(Float::with_val(work, radius));
    }
    let overlaps = count_overlaps(&roots, &radii, work);
    if uncertified > 0 || overlaps > 0 {
        return Err(RootError::NonConvergence {
            prec,
            sweeps: outcome.sweeps,
            unconverged: outcome.unconverged,
            overlaps,
            uncertified,
        });
    }
    Ok((roots, radii))
}

/// Number of pairs of intersecting discs. Candidates are found by a sweep
/// over real parts in `f64` and confirmed exactly.
fn count_overlaps(roots: &[Complex], radii: &[Float], prec: u32) -> usize {
    let n = roots.len();
    let re: Vec<f64> = roots.iter().map(|z| z.real().to_f64()).collect();
    let im: Vec<f64> = roots.iter().map(|z| z.imag().to_f64()).collect();
    let rf: Vec<f64> = radii.iter().map(|r| r.to_f64_round(Round::Up)).collect();
    let rmax = rf.iter().cloned().fold(0.0, f64::max);
    let slack = |i: usize| 1e-12 * (1.0 + re[i].abs() + im[i].abs());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| re[a].total_cmp(&re[b]));
    let mut overlaps = 0;
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if re[j] - re[i] > rf[i] + rmax + slack(i) {
                break;
            }
            let dist = ((re[j] - re[i]).powi(2) + (im[j] - im[i]).powi(2)).sqrt();
            if dist > (rf[i] + rf[j]) * 1.01 + slack(i) + slack(j) {
                continue;
            }
            let exact = Float::with_val(prec, Complex::with_val(prec, &roots[i] - &roots[j]).abs_ref());
            if exact <= Float::with_val(prec, &radii[i] + &radii[j]) {
                overlaps += 1;
            }
        }
    }
    overlaps
}
