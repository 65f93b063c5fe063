//! Certified multiprecision roots of the exact polynomials, exact real-root
//! counts, and matching of roots against predicted points.
//!
//! Roots are computed for the integer polynomial in the stored (scaled)
//! variable and mapped back to the original variable at the end.

mod aberth;
mod matching;
mod squarefree;
mod sturm;

use std::fmt::Write as _;

use rug::{Complex, Float};
use thiserror::Error;

use crate::exact_poly::{ExactPoly, PolySource};
use crate::numeric::abs_f64;

pub use aberth::{aberth, aberth_complex, aberth_seeded, certify, certify_complex, AberthOutcome, SEED as ABERTH_SEED};
pub use matching::{match_roots, MatchPair, MatchReport};
pub use squarefree::is_squarefree;
pub use sturm::{count_real_roots, count_real_roots_poly, sturm_sequence};

pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 1024;

#[derive(Debug, Clone, Error)]
pub enum RootError {
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial has no roots (zero or constant)")]
    Degenerate,
    #[error("root finding did not converge at {prec} bits: {unconverged} roots still moving after {sweeps} sweeps, {overlaps} overlapping discs, {uncertified} uncertified")]
    NonConvergence { prec: u32, sweeps: usize, unconverged: usize, overlaps: usize, uncertified: usize },
    #[error("{count} prediction discs contain more than one root")]
    AmbiguousMatch { count: usize, report: Box<MatchReport> },
}

/// Roots of a polynomial with a certification radius each: the disc of that
/// radius about `roots[i]` contains exactly one root.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    pub radii: Vec<Float>,
    pub source: Option<PolySource>,
    pub prec: u32,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_radius(&self) -> Float {
        self.radii.iter().fold(Float::new(self.prec), |acc, r| if *r > acc { r.clone() } else { acc })
    }

    /// Roots and radii multiplied by a positive factor.
    pub fn rescaled(&self, factor: &Float) -> RootSet {
        RootSet {
            roots: self.roots.iter().map(|z| Complex::with_val(self.prec, z * factor)).collect(),
            radii: self.radii.iter().map(|r| Float::with_val(self.prec, r * factor)).collect(),
            source: self.source,
            prec: self.prec,
        }
    }

    /// Every root has a conjugate partner within the sum of the two radii.
    pub fn is_conjugate_closed(&self) -> bool {
        self.roots.iter().zip(&self.radii).all(|(z, r)| {
            let zc = Complex::with_val(self.prec, z.conj_ref());
            self.roots.iter().zip(&self.radii).any(|(w, s)| {
                let d = Float::with_val(self.prec, Complex::with_val(self.prec, &zc - w).abs_ref());
                d <= Float::with_val(self.prec, r + s)
            })
        })
    }

    /// Roots whose certification disc meets the real axis.
    pub fn possibly_real(&self) -> usize {
        self.roots.iter().zip(&self.radii).filter(|(z, r)| Float::with_val(self.prec, z.imag().abs_ref()) <= **r).count()
    }

    /// CSV with header `re,im,cert_radius`. `digits` limits significant
    /// digits; `None` prints enough to round-trip the working precision.
    pub fn to_csv(&self, digits: Option<usize>) -> String {
        let mut out = String::from("re,im,cert_radius\n");
        for (z, r) in self.roots.iter().zip(&self.radii) {
            let _ = writeln!(
                out,
                "{},{},{}",
                z.real().to_string_radix(10, digits),
                z.imag().to_string_radix(10, digits),
                r.to_string_radix(10, Some(digits.unwrap_or(6).min(17)))
            );
        }
        out
    }
}

/// All roots of `p` in its original variable, certified, at `prec` bits.
/// The precision is doubled on failure, up to [`MAX_PRECISION`] (or `prec`
/// itself if larger).
pub fn find_roots(p: &ExactPoly, prec: u32) -> Result<RootSet, RootError> {
    find_roots_seeded(p, prec, ABERTH_SEED)
}

/// [`find_roots`] with an explicit seed for the starting-point jitter.
pub fn find_roots_seeded(p: &ExactPoly, prec: u32, seed: u64) -> Result<RootSet, RootError> {
    let degree = p.degree().ok_or(RootError::Degenerate)?;
    if degree == 0 {
        return Ok(RootSet { roots: Vec::new(), radii: Vec::new(), source: p.source, prec });
    }
    if !is_squarefree(&p.poly) {
        return Err(RootError::NotSquarefree);
    }
    let ceiling = prec.max(MAX_PRECISION);
    let mut bits = prec;
    loop {
        match find_roots_at_seeded(p, bits, seed) {
            Ok(set) => return Ok(set),
            Err(e @ RootError::NonConvergence { .. }) if bits * 2 > ceiling => return Err(e),
            Err(RootError::NonConvergence { .. }) => bits *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Roots of the polynomial with the given complex coefficients (lowest
/// degree first). Leading zeros are dropped; the radii certify roots of the
/// polynomial with exactly these coefficients. There is no squarefree check,
/// so a multiple root surfaces as `NonConvergence`.
pub fn find_roots_complex(coeffs: &[Complex], prec: u32) -> Result<RootSet, RootError> {
    let len = coeffs.iter().rposition(|c| !c.is_zero()).ok_or(RootError::Degenerate)? + 1;
    let coeffs = &coeffs[..len];
    if len == 1 {
        return Ok(RootSet { roots: Vec::new(), radii: Vec::new(), source: None, prec });
    }
    let ceiling = prec.max(MAX_PRECISION);
    let mut bits = prec;
    loop {
        let outcome = aberth_complex(coeffs, bits);
        match certify_complex(coeffs, &outcome, bits) {
            Ok((roots, radii)) => return Ok(RootSet { roots, radii, source: None, prec: 2 * bits }),
            Err(e @ RootError::NonConvergence { .. }) if bits * 2 > ceiling => return Err(e),
            Err(RootError::NonConvergence { .. }) => bits *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// One attempt at fixed precision, without escalation.
pub fn find_roots_at(p: &ExactPoly, prec: u32) -> Result<RootSet, RootError> {
    find_roots_at_seeded(p, prec, ABERTH_SEED)
}

fn find_roots_at_seeded(p: &ExactPoly, prec: u32, seed: u64) -> Result<RootSet, RootError> {
    let outcome = aberth_seeded(&p.poly, prec, seed);
    let (roots_w, radii_w) = certify(&p.poly, &outcome, prec)?;
    // roots come back polished at twice the working precision
    let work = 2 * prec;
    let scale = p.scale.to_float(work + 16);
    let roots: Vec<Complex> = roots_w.iter().map(|z| Complex::with_val(work, z * &scale)).collect();
    // rescaling moves a root by at most a few ulps; pad the radius accordingly
    let radii = roots
        .iter()
        .zip(&radii_w)
        .map(|(z, r)| {
            let ulp = Float::with_val(64, Float::i_exp(1, 4 - work as i32)) * (1.0 + abs_f64(z));
            Float::with_val(work, r * &scale) * (1.0 + 2f64.powi(-40)) + ulp
        })
        .collect();
    Ok(RootSet { roots, radii, source: p.source, prec: work })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::PolyTable;

    #[test]
    fn quadratic_roots() {
        let t = PolyTable::default();
        let set = find_roots(&t.hermite(2, 1).unwrap(), 128).unwrap();
        let mut re: Vec<f64> = set.roots.iter().map(|z| z.real().to_f64()).collect();
        re.sort_by(f64::total_cmp);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((re[0] + s).abs() < 1e-30 && (re[1] - s).abs() < 1e-30);
        assert!(set.radii.iter().all(|r| r.to_f64() < 1e-30));
    }

    #[test]
    fn single_root_at_origin() {
        let t = PolyTable::default();
        let set = find_roots(&t.hermite(1, 1).unwrap(), 128).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.roots[0].real().to_f64().abs() < 1e-30);
    }

    #[test]
    fn not_squarefree_is_rejected() {
        let p = ExactPoly::from_i64s(&[1, -2, 1]);
        assert!(matches!(find_roots(&p, 128), Err(RootError::NotSquarefree)));
    }

    #[test]
    fn complex_coefficients() {
        // z² + 1
        let c: Vec<Complex> = [1, 0, 1].iter().map(|&v| Complex::with_val(128, v)).collect();
        let set = find_roots_complex(&c, 128).unwrap();
        let mut im: Vec<f64> = set.roots.iter().map(|z| z.imag().to_f64()).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 1.0).abs() < 1e-30 && (im[1] - 1.0).abs() < 1e-30);
        let trailing = vec![Complex::with_val(64, 2), Complex::with_val(64, 1), Complex::new(64)];
        assert_eq!(find_roots_complex(&trailing, 64).unwrap().len(), 1);
    }

    #[test]
    fn csv_header_and_rows() {
        let t = PolyTable::default();
        let set = find_roots(&t.hermite(2, 1).unwrap(), 64).unwrap();
        let csv = set.to_csv(Some(10));
        assert!(csv.starts_with("re,im,cert_radius\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
