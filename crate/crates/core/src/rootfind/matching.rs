//! Matching of certified roots against predicted points.
//!
//! A root is *inside* a disc of radius ρ about a prediction when
//! `dist + cert ≤ ρ` and *possibly inside* when `dist − cert ≤ ρ`. A
//! prediction is satisfied when exactly one root is inside and no other root
//! is possibly inside; that root is then paired with it, unless it is
//! already the unique root of a nearer prediction.

use rug::{Complex, Float};
use serde::Serialize;

use super::{RootError, RootSet};

#[derive(Clone, Debug, Serialize)]
pub struct MatchPair {
    pub prediction: usize,
    pub root: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MatchReport {
    pub pairs: Vec<MatchPair>,
    pub unmatched_predictions: Vec<usize>,
    pub unmatched_roots: Vec<usize>,
    /// Predictions with two or more roots certainly inside.
    pub ambiguous: Vec<usize>,
    pub radius: f64,
    /// Largest distance from a prediction to its nearest root.
    pub max_nearest_distance: f64,
}

impl MatchReport {
    pub fn all_satisfied(&self) -> bool {
        self.unmatched_predictions.is_empty() && self.ambiguous.is_empty()
    }
}

/// Match `roots` against `predictions` with discs of the given radius.
/// Returns [`RootError::AmbiguousMatch`] (carrying the full report) when some
/// disc certainly contains two roots.
pub fn match_roots(roots: &RootSet, predictions: &[Complex], radius: &Float) -> Result<MatchReport, RootError> {
    let prec = roots.prec.max(64);
    let rho = Float::with_val(prec, radius);
    let mut report = MatchReport { radius: radius.to_f64(), ..Default::default() };
    let mut owner: Vec<Option<(usize, f64)>> = vec![None; roots.len()];

    for (pi, p) in predictions.iter().enumerate() {
        let mut inside = Vec::new();
        let mut possible = 0usize;
        let mut nearest = f64::INFINITY;
        for (ri, (z, cert)) in roots.roots.iter().zip(&roots.radii).enumerate() {
            let dist = Float::with_val(prec, Complex::with_val(prec, z - p).abs_ref());
            nearest = nearest.min(dist.to_f64());
            if Float::with_val(prec, &dist - cert) <= rho {
                possible += 1;
                if Float::with_val(prec, &dist + cert) <= rho {
                    inside.push((ri, dist.to_f64()));
                }
            }
        }
        if nearest.is_finite() {
            report.max_nearest_distance = report.max_nearest_distance.max(nearest);
        }
        match inside.as_slice() {
            [(ri, dist)] if possible == 1 => match owner[*ri] {
                Some((_, d)) if d <= *dist => report.unmatched_predictions.push(pi),
                Some((other, _)) => {
                    report.unmatched_predictions.push(other);
                    owner[*ri] = Some((pi, *dist));
                }
                None => owner[*ri] = Some((pi, *dist)),
            },
            list if list.len() >= 2 => {
                report.ambiguous.push(pi);
                report.unmatched_predictions.push(pi);
            }
            _ => report.unmatched_predictions.push(pi),
        }
    }
    for (ri, o) in owner.iter().enumerate() {
        match o {
            Some((pi, d)) => report.pairs.push(MatchPair { prediction: *pi, root: ri, distance: *d }),
            None => report.unmatched_roots.push(ri),
        }
    }
    report.pairs.sort_by_key(|p| p.prediction);
    report.unmatched_predictions.sort_unstable();
    if !report.ambiguous.is_empty() {
        return Err(RootError::AmbiguousMatch { count: report.ambiguous.len(), report: Box::new(report) });
    }
    Ok(report)
}
