//! Root-versus-lattice comparisons for `H_{m,n}`: the data behind the
//! scatter plots of rescaled roots, their predicted locations and the
//! curves `Im α = g_{j,E}(Re α)`.
//!
//! * `Fig1`: the whole bulk lattice (`σ = 0.2`, radius `(1/3)E^(−4/3)`).
//! * `Fig2Bulk`: the single point `α_{j,(m+2)/4}`, by default `j = n − 1`.
//! * `Fig2Edge`: the single point `α_{j,k}` with `k = ⌊E/4 − √E⌋ + ½`,
//!   `δ = 2/3`, `s = 1`, radius `(1/12)E^(−1)`.
//! * `Fig3`: the whole edge lattice with the `Fig2Edge` parameters.

use std::fmt::Write as _;

use rug::Float;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::asymptotics::{
    alpha_jk, edge_k, g_curve, lattice, refined_alpha, regime_json, rescale_roots, AsymptoticsError, BulkParams,
    LatticePoint, LatticePrediction, Regime,
};
use crate::exact_poly::{PolyError, PolyTable};
use crate::rootfind::{find_roots_seeded, match_roots, MatchReport, RootError, RootSet, ABERTH_SEED};

#[derive(Debug, Clone, Error)]
pub enum FigureError {
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error("invalid figure request: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    Fig1,
    Fig2Bulk,
    Fig2Edge,
    Fig3,
}

impl FigureKind {
    pub fn default_regime(self) -> Regime {
        match self {
            FigureKind::Fig1 | FigureKind::Fig2Bulk => Regime::Bulk { sigma: 0.2 },
            FigureKind::Fig2Edge | FigureKind::Fig3 => Regime::Edge { delta: 2.0 / 3.0, s: 1.0 },
        }
    }

    pub fn default_radius_constant(self) -> f64 {
        match self {
            FigureKind::Fig1 | FigureKind::Fig2Bulk => 1.0 / 3.0,
            FigureKind::Fig2Edge | FigureKind::Fig3 => 1.0 / 12.0,
        }
    }

    fn single_point(self) -> bool {
        matches!(self, FigureKind::Fig2Bulk | FigureKind::Fig2Edge)
    }
}

impl std::str::FromStr for FigureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(FigureKind::Fig1),
            "fig2-bulk" => Ok(FigureKind::Fig2Bulk),
            "fig2-edge" => Ok(FigureKind::Fig2Edge),
            "fig3" => Ok(FigureKind::Fig3),
            _ => Err(format!("unknown figure {s:?} (expected fig1, fig2-bulk, fig2-edge or fig3)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureSpec {
    pub kind: FigureKind,
    pub m: u64,
    pub n: u64,
    pub regime: Regime,
    pub radius_constant: f64,
    /// Restrict to one `j`; the single-point figures default to `n − 1`.
    pub j: Option<i64>,
    /// Restrict to one `k`; the single-point figures default to the
    /// figure's own index.
    pub k: Option<f64>,
    /// Use the roots of the full phase equation instead of `α_{j,k}`.
    pub refined: bool,
    pub prec: u32,
    /// Seed for the root finder's starting points.
    pub seed: u64,
}

impl FigureSpec {
    pub fn new(kind: FigureKind, m: u64, n: u64) -> Self {
        FigureSpec {
            kind,
            m,
            n,
            regime: kind.default_regime(),
            radius_constant: kind.default_radius_constant(),
            j: None,
            k: None,
            refined: false,
            prec: crate::asymptotics::DEFAULT_PREC,
            seed: ABERTH_SEED,
        }
    }

    fn selection(&self, params: &BulkParams) -> (Option<i64>, Option<f64>) {
        if !self.kind.single_point() {
            return (self.j, self.k);
        }
        let e = params.e();
        let j = self.j.unwrap_or(self.n as i64 - 1);
        let k = self.k.unwrap_or(match self.kind {
            FigureKind::Fig2Bulk => (self.m as f64 + 2.0) / 4.0,
            _ => edge_k(e),
        });
        (Some(j), Some(k))
    }
}

/// Everything one comparison produces.
#[derive(Clone, Debug)]
pub struct FigureRun {
    pub spec: FigureSpec,
    pub params: BulkParams,
    /// Roots of `H_{m,n}` divided by `√E`.
    pub roots: RootSet,
    pub predictions: LatticePrediction,
    pub radius: f64,
    pub report: MatchReport,
    pub gcurves: Vec<(i64, Vec<(f64, f64)>)>,
}

const GCURVE_XMAX: f64 = 0.95;
const GCURVE_SAMPLES: usize = 191;

pub fn run_figure(spec: &FigureSpec) -> Result<FigureRun, FigureError> {
    spec.regime.validate()?;
    if spec.radius_constant.is_nan() || spec.radius_constant <= 0.0 {
        return Err(FigureError::Invalid(format!("radius constant {} must be positive", spec.radius_constant)));
    }
    let params = BulkParams::new(spec.m, spec.n)?;
    let e = params.e();
    let (j_sel, k_sel) = spec.selection(&params);
    let js: Vec<i64> = match j_sel {
        Some(j) if params.j_values().contains(&j) => vec![j],
        Some(j) => return Err(FigureError::Invalid(format!("j = {j} is not in J_{}", spec.n))),
        None => params.j_values(),
    };
    let entries = match k_sel {
        Some(k) => {
            let bound = spec.regime.k_bound(e);
            if k.abs() > bound {
                return Err(FigureError::Invalid(format!("|k| = {} exceeds the regime bound {bound}", k.abs())));
            }
            js.iter().map(|&j| Ok(LatticePoint { j, k, alpha: alpha_jk(j, k, &params, spec.prec)? })).collect::<Result<Vec<_>, FigureError>>()?
        }
        None => lattice(&params, spec.regime, spec.prec)?.entries.into_iter().filter(|p| js.contains(&p.j)).collect(),
    };
    let entries = if spec.refined {
        entries
            .into_iter()
            .map(|p| Ok(LatticePoint { alpha: refined_alpha(p.j, p.k, &params, spec.prec)?, ..p }))
            .collect::<Result<Vec<_>, FigureError>>()?
    } else {
        entries
    };
    let predictions = LatticePrediction { entries, params, regime: spec.regime };

    let h = PolyTable::global().hermite(spec.m as i64, spec.n as i64)?;
    let roots = rescale_roots(&find_roots_seeded(&h, spec.prec, spec.seed)?, e);
    let radius = spec.regime.radius(e, spec.radius_constant);
    let report = match match_roots(&roots, &predictions.alphas(), &Float::with_val(roots.prec, radius)) {
        Ok(r) => r,
        Err(RootError::AmbiguousMatch { report, .. }) => *report,
        Err(err) => return Err(err.into()),
    };
    let gcurves = js
        .iter()
        .map(|&j| Ok((j, g_curve(j, e, spec.n, GCURVE_XMAX, GCURVE_SAMPLES)?)))
        .collect::<Result<Vec<_>, FigureError>>()?;
    Ok(FigureRun { spec: spec.clone(), params, roots, predictions, radius, report, gcurves })
}

impl FigureRun {
    /// Every prediction has exactly one root in its disc and none is ambiguous.
    pub fn all_satisfied(&self) -> bool {
        self.report.all_satisfied()
    }

    fn label(&self, idx: usize) -> Value {
        let p = &self.predictions.entries[idx];
        json!({ "j": p.j, "k": p.k })
    }

    pub fn report_json(&self) -> Value {
        let r = &self.report;
        json!({
            "figure": self.spec.kind,
            "regime": regime_json(&self.spec.regime, &self.params),
            "radius": self.radius,
            "radius_constant": self.spec.radius_constant,
            "refined": self.spec.refined,
            "predictions": self.predictions.len(),
            "roots": self.roots.len(),
            "satisfied": r.pairs.len(),
            "all_satisfied": self.all_satisfied(),
            "ambiguous": r.ambiguous.iter().map(|&i| self.label(i)).collect::<Vec<_>>(),
            "unmatched": r.unmatched_predictions.iter().map(|&i| self.label(i)).collect::<Vec<_>>(),
            "pairs": r.pairs.iter().map(|p| {
                let pt = &self.predictions.entries[p.prediction];
                json!({ "j": pt.j, "k": pt.k, "root": p.root, "distance": p.distance })
            }).collect::<Vec<_>>(),
            "max_distance": r.max_nearest_distance,
            "seed": self.spec.seed,
            "precision_bits": self.spec.prec,
        })
    }

    /// `j,x,g` rows.
    pub fn gcurves_csv(&self) -> String {
        let mut out = String::from("j,x,g\n");
        for (j, pts) in &self.gcurves {
            for (x, g) in pts {
                let _ = writeln!(out, "{j},{x:?},{g:?}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_member() {
        let run = run_figure(&FigureSpec::new(FigureKind::Fig1, 1, 1)).unwrap();
        assert_eq!(run.roots.len(), 1);
        assert_eq!(run.predictions.len(), 1);
        assert!(run.predictions.entries[0].alpha.is_zero());
        assert!(run.all_satisfied());
    }

    #[test]
    fn single_point_defaults() {
        let run = run_figure(&FigureSpec::new(FigureKind::Fig2Edge, 16, 5)).unwrap();
        assert_eq!(run.predictions.len(), 1);
        let p = &run.predictions.entries[0];
        assert_eq!((p.j, p.k), (4, 3.5));
        assert!(run.all_satisfied());
        assert_eq!(run.report_json()["seed"], ABERTH_SEED);
    }

    #[test]
    fn rejects_bad_requests() {
        let mut spec = FigureSpec::new(FigureKind::Fig2Bulk, 9, 5);
        assert!(run_figure(&spec).is_err()); // (9+2)/4 is off the integer grid
        spec.m = 8;
        spec.j = Some(3);
        assert!(matches!(run_figure(&spec), Err(FigureError::Invalid(_))));
    }
}
