//! `piv`: exact polynomials, root/lattice comparisons and invariant suites.
//!
//! Exit codes: 0 success, 2 invalid input, 3 a checked invariant failed
//! (or a computation could not be completed).

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use piv_core::asymptotics::{AsymptoticsError, Regime};
use piv_core::exact_poly::{PolyError, PolyTable};
use piv_core::figures::{run_figure, FigureError, FigureKind, FigureRun, FigureSpec};
use piv_core::oscillator::{no_log_betas, roots_via_qes, OscillatorError, NOLOG_CSV_HEADER};
use piv_core::rational_pw::Family;
use piv_core::rootfind::{find_roots_seeded, RootError, ABERTH_SEED};
use piv_core::suites::{run_suite, Caps, Suite};
use rug::Complex;
use serde_json::{json, Value};
use thiserror::Error;

use output::{write_atomic, Emit};

#[derive(Debug, Error)]
enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::InvalidIndex { .. } | PolyError::CapExceeded { .. } | PolyError::Parse(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<FigureError> for CliError {
    fn from(e: FigureError) -> Self {
        match e {
            FigureError::Invalid(_) | FigureError::Asymptotics(AsymptoticsError::Domain(_)) => CliError::Invalid(e.to_string()),
            FigureError::Poly(p) => p.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<OscillatorError> for CliError {
    fn from(e: OscillatorError) -> Self {
        match e {
            OscillatorError::InvalidIndex { .. } | OscillatorError::Domain(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "piv", version, about = "Rational Painlevé IV solutions, their special polynomials and root asymptotics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Output format for commands that print a table or a document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (directory for `figure`). Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Significant digits for numbers in CSV output. Default: shortest
    /// round-trip form of the double-precision value.
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Seed for the root finder's starting points.
    #[arg(long, global = true, default_value_t = ABERTH_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolyKind {
    Hermite,
    Okamoto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureArg {
    Fig1,
    #[value(name = "fig2-bulk")]
    Fig2Bulk,
    #[value(name = "fig2-edge")]
    Fig2Edge,
    Fig3,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Recursions,
    Piv,
    Backlund,
    Realroots,
    Qes,
    Nolog,
    Semicircle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HermiteFamily {
    #[value(name = "HI", alias = "hi")]
    Hi,
    #[value(name = "HII", alias = "hii")]
    Hii,
    #[value(name = "HIII", alias = "hiii")]
    Hiii,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a generalised Hermite or Okamoto polynomial.
    Poly {
        #[arg(long, value_enum)]
        family: PolyKind,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        #[arg(short, allow_negative_numbers = true)]
        n: i64,
        /// Hermite only: print coefficients in z/2 (the stored form)
        /// instead of z.
        #[arg(long)]
        scaled: bool,
    },
    /// Compare the roots of H_{m,n} with the predicted lattice and write
    /// roots.csv, lattice.csv, gcurves.csv and report.json into --out.
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
        #[arg(short)]
        m: u64,
        #[arg(short)]
        n: u64,
        /// Bulk window |k| ≤ σE.
        #[arg(long)]
        sigma: Option<f64>,
        /// Edge exponent δ.
        #[arg(long)]
        delta: Option<f64>,
        /// Edge offset s.
        #[arg(long)]
        s: Option<f64>,
        /// Constant in front of the disc radius.
        #[arg(long)]
        radius_const: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        j: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Compare against the roots of the full phase equation.
        #[arg(long)]
        refined: bool,
    },
    /// Run an invariant suite and print a JSON verdict.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        max_index: Option<i64>,
        #[arg(long)]
        okamoto_index: Option<i64>,
        #[arg(long)]
        max_m: Option<i64>,
        #[arg(long)]
        max_n: Option<i64>,
    },
    /// Certify the roots of H_{m,n} through one of the Hermite oscillators.
    Qes {
        #[arg(long, value_enum)]
        family: HermiteFamily,
        #[arg(short)]
        m: i64,
        #[arg(short)]
        n: i64,
    },
    /// Values of β with an apparent singularity, for a sweep over E.
    Nolog {
        #[arg(short)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        alpha_re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        alpha_im: f64,
        /// Values of E; `inf` for the limit.
        #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "inf")]
        energy: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("piv: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let g = cli.global;
    if g.precision_bits < 64 {
        return Err(CliError::Invalid(format!("precision must be at least 64 bits, got {}", g.precision_bits)));
    }
    let emit = Emit { out: g.out.clone(), digits: g.digits };
    match cli.command {
        Command::Poly { family, m, n, scaled } => cmd_poly(&emit, g.format, family, m, n, scaled),
        Command::Figure { which, m, n, sigma, delta, s, radius_const, j, k, refined } => {
            let kind = match which {
                FigureArg::Fig1 => FigureKind::Fig1,
                FigureArg::Fig2Bulk => FigureKind::Fig2Bulk,
                FigureArg::Fig2Edge => FigureKind::Fig2Edge,
                FigureArg::Fig3 => FigureKind::Fig3,
            };
            let mut spec = FigureSpec::new(kind, m, n);
            spec.regime = match spec.regime {
                Regime::Bulk { sigma: d } => {
                    if delta.is_some() || s.is_some() {
                        return Err(CliError::Invalid("--delta and --s apply to the edge figures".into()));
                    }
                    Regime::Bulk { sigma: sigma.unwrap_or(d) }
                }
                Regime::Edge { delta: d0, s: s0 } => {
                    if sigma.is_some() {
                        return Err(CliError::Invalid("--sigma applies to the bulk figures".into()));
                    }
                    Regime::Edge { delta: delta.unwrap_or(d0), s: s.unwrap_or(s0) }
                }
            };
            spec.regime.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
            if let Some(c) = radius_const {
                spec.radius_constant = c;
            }
            spec.j = j;
            spec.k = k;
            spec.refined = refined;
            spec.prec = g.precision_bits;
            spec.seed = g.seed;
            cmd_figure(&emit, &spec)
        }
        Command::Verify { suite, max_index, okamoto_index, max_m, max_n } => {
            let suite = match suite {
                SuiteArg::Recursions => Suite::Recursions,
                SuiteArg::Piv => Suite::Piv,
                SuiteArg::Backlund => Suite::Backlund,
                SuiteArg::Realroots => Suite::RealRoots,
                SuiteArg::Qes => Suite::Qes,
                SuiteArg::Nolog => Suite::NoLog,
                SuiteArg::Semicircle => Suite::Semicircle,
            };
            let default_index = match suite {
                Suite::Recursions => 10,
                Suite::Piv => 6,
                _ => 5,
            };
            let d = Caps::default();
            let caps = Caps {
                max_index: max_index.unwrap_or(default_index),
                okamoto_index: okamoto_index.unwrap_or(d.okamoto_index),
                max_m: max_m.unwrap_or(d.max_m),
                max_n: max_n.unwrap_or(d.max_n),
                prec: g.precision_bits,
            };
            for (name, v, cap) in [("max-index", caps.max_index, 40), ("okamoto-index", caps.okamoto_index, 20), ("max-m", caps.max_m, 60), ("max-n", caps.max_n, 60)] {
                if !(0..=cap).contains(&v) {
                    return Err(CliError::Invalid(format!("--{name} must lie in 0..={cap}, got {v}")));
                }
            }
            cmd_verify(&emit, suite, &caps)
        }
        Command::Qes { family, m, n } => {
            let family = match family {
                HermiteFamily::Hi => Family::HermiteI,
                HermiteFamily::Hii => Family::HermiteII,
                HermiteFamily::Hiii => Family::HermiteIII,
            };
            cmd_qes(&emit, family, m, n, g.precision_bits, g.seed)
        }
        Command::Nolog { n, alpha_re, alpha_im, energy } => cmd_nolog(&emit, g.format, n, alpha_re, alpha_im, &energy, g.precision_bits),
    }
}

fn cmd_poly(emit: &Emit, format: Format, family: PolyKind, m: i64, n: i64, scaled: bool) -> Result<u8, CliError> {
    let table = PolyTable::global();
    let p = match family {
        PolyKind::Hermite => {
            let h = table.hermite(m, n)?;
            if scaled {
                (*h).clone()
            } else {
                h.unscaled().ok_or_else(|| CliError::Failed("Hermite coefficients are not integers".into()))?
            }
        }
        PolyKind::Okamoto => {
            if scaled {
                return Err(CliError::Invalid("--scaled applies to Hermite polynomials".into()));
            }
            (*table.okamoto(m, n)?).clone()
        }
    };
    let doc = p.to_json();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serialisable") + "\n",
        Format::Csv => {
            let mut s = format!("# scale {}\npower,coeff\n", doc.scale);
            for (i, c) in doc.coeffs.iter().enumerate() {
                s += &format!("{i},{c}\n");
            }
            s
        }
    };
    emit.text(&text)?;
    Ok(0)
}

fn cmd_figure(emit: &Emit, spec: &FigureSpec) -> Result<u8, CliError> {
    let dir = emit.out.clone().ok_or_else(|| CliError::Invalid("figure needs --out DIR".into()))?;
    std::fs::create_dir_all(&dir)?;
    let run = run_figure(spec)?;
    write_atomic(&dir.join("roots.csv"), &output::roots_csv(&run.roots, emit.digits))?;
    write_atomic(&dir.join("lattice.csv"), &output::lattice_csv(&run, emit.digits))?;
    write_atomic(&dir.join("gcurves.csv"), &run.gcurves_csv())?;
    let report = run.report_json();
    write_atomic(&dir.join("report.json"), &(serde_json::to_string_pretty(&report).expect("serialisable") + "\n"))?;
    println!("{}", summary(&run));
    Ok(if run.all_satisfied() { 0 } else { 3 })
}

fn summary(run: &FigureRun) -> Value {
    json!({
        "predictions": run.predictions.len(),
        "satisfied": run.report.pairs.len(),
        "all_satisfied": run.all_satisfied(),
        "max_distance": run.report.max_nearest_distance,
        "radius": run.radius,
    })
}

fn cmd_verify(emit: &Emit, suite: Suite, caps: &Caps) -> Result<u8, CliError> {
    let report = run_suite(suite, caps);
    let mut doc = report.to_json();
    doc["caps"] = serde_json::to_value(caps).expect("serialisable");
    emit.text(&(serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"))?;
    Ok(if report.passed { 0 } else { 3 })
}

fn cmd_qes(emit: &Emit, family: Family, m: i64, n: i64, prec: u32, seed: u64) -> Result<u8, CliError> {
    if m < 1 || n < 1 {
        return Err(CliError::Invalid(format!("m and n must be positive, got ({m}, {n})")));
    }
    let h = PolyTable::global().hermite(m, n)?;
    let roots = find_roots_seeded(&h, prec, seed)?;
    let tol = piv_core::oscillator::default_tolerance(prec);
    let (found, failed) = roots_via_qes(family, m, n, &roots.roots, tol, prec)?;
    let ok = failed.is_empty() && found.len() == roots.len();
    let doc = json!({
        "family": family,
        "m": m,
        "n": n,
        "tolerance": tol,
        "certificates": found.iter().map(|(_, c)| c.to_json()).collect::<Vec<_>>(),
        "failed": failed.iter().map(|(a, e)| json!({ "seed": piv_core::numeric::complex_to_string(a), "error": e.to_string() })).collect::<Vec<_>>(),
        "precision_bits": prec,
        "seed": seed,
    });
    emit.text(&(serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"))?;
    Ok(if ok { 0 } else { 3 })
}

fn cmd_nolog(emit: &Emit, format: Format, n: u64, re: f64, im: f64, energies: &[String], prec: u32) -> Result<u8, CliError> {
    if n == 0 {
        return Err(CliError::Invalid("n must be positive".into()));
    }
    let alpha = Complex::with_val(prec, (re, im));
    let mut branches = Vec::new();
    for e in energies {
        let energy = match e.as_str() {
            "inf" | "infinity" => None,
            s => match s.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Some(v),
                _ => return Err(CliError::Invalid(format!("energy {s:?} is not a positive number or inf"))),
            },
        };
        branches.push(no_log_betas(n, &alpha, energy, prec)?);
    }
    let text = match format {
        Format::Csv => std::iter::once(NOLOG_CSV_HEADER.to_string()).chain(branches.iter().map(|b| b.csv_rows())).collect(),
        Format::Json => serde_json::to_string_pretty(&branches).expect("serialisable") + "\n",
    };
    emit.text(&text)?;
    Ok(0)
}
