use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn piv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_piv")).args(args).output().expect("run piv")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn hermite_coefficients_in_z() {
    let out = piv(&["poly", "--family", "hermite", "-m", "1", "-n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["coeffs"], serde_json::json!(["0", "2"]));
    assert_eq!(doc["scale"], "1");

    let doc = json_of(&piv(&["poly", "--family", "hermite", "-m", "0", "-n", "7"]));
    assert_eq!(doc["coeffs"], serde_json::json!(["1"]));

    // H_{2,1} is the Hermite polynomial 4z^2 - 2
    let doc = json_of(&piv(&["poly", "--family", "hermite", "-m", "2", "-n", "1"]));
    assert_eq!(doc["coeffs"], serde_json::json!(["-2", "0", "4"]));
    let doc = json_of(&piv(&["poly", "--family", "hermite", "-m", "2", "-n", "1", "--scaled"]));
    assert_eq!(doc["scale"], "1/2");
}

#[test]
fn okamoto_degree() {
    let doc = json_of(&piv(&["poly", "--family", "okamoto", "-m", "2", "-n", "2"]));
    let coeffs = doc["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 9);
    assert_eq!(coeffs[8], "1");
}

#[test]
fn poly_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let out = piv(&["poly", "--family", "hermite", "-m", "3", "-n", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# scale"));
    assert_eq!(lines.next(), Some("power,coeff"));
    assert_eq!(lines.count(), 7);
    // no temporary files left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn trivial_figure() {
    let dir = tempfile::tempdir().unwrap();
    let out = piv(&["figure", "fig1", "-m", "1", "-n", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["roots.csv", "lattice.csv", "gcurves.csv", "report.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["all_satisfied"], true);
    assert_eq!(report["predictions"], 1);
}

#[test]
fn edge_figure_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = piv(&["figure", "fig2-edge", "-m", "16", "-n", "5", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["pairs"][0]["j"], 4);
    assert_eq!(report["pairs"][0]["k"], 3.5);

    let mut rdr = csv_rows(&dir.path().join("roots.csv"));
    assert_eq!(rdr.remove(0), ["re", "im", "cert_radius"]);
    assert_eq!(rdr.len(), 16 * 5);
    let parsed: Vec<(f64, f64)> = rdr.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    // shortest round-trip form: printing the parsed value again gives the same text
    for (row, (re, im)) in rdr.iter().zip(&parsed) {
        assert_eq!(row[0], format!("{re:?}"));
        assert_eq!(row[1], format!("{im:?}"));
    }
    // the matched root is where the report says
    let idx = report["pairs"][0]["root"].as_u64().unwrap() as usize;
    let lattice = csv_rows(&dir.path().join("lattice.csv"));
    let (pr, pi): (f64, f64) = (lattice[1][2].parse().unwrap(), lattice[1][3].parse().unwrap());
    let dist = ((parsed[idx].0 - pr).powi(2) + (parsed[idx].1 - pi).powi(2)).sqrt();
    assert!((dist - report["pairs"][0]["distance"].as_f64().unwrap()).abs() < 1e-12);

    // more digits on request
    let out = piv(&["figure", "fig2-edge", "-m", "16", "-n", "5", "--digits", "40", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("roots.csv"));
    assert!(rows[1][0].len() > 35);
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path).unwrap().lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn verify_realroots() {
    let out = piv(&["verify", "realroots", "--max-m", "6", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["passed"], true);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for args in [
        vec!["figure", "fig1", "-m", "40", "-n", "5", "--sigma", "0.3", "--out", d],
        vec!["figure", "fig2-edge", "-m", "16", "-n", "5", "--sigma", "0.1", "--out", d],
        vec!["--precision-bits", "32", "poly", "--family", "hermite", "-m", "1", "-n", "1"],
        vec!["poly", "--family", "hermite", "-m", "-1", "-n", "1"],
        vec!["poly", "--family", "laguerre", "-m", "1", "-n", "1"],
        vec!["verify", "piv", "--max-index", "500"],
    ] {
        let out = piv(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn qes_certificates() {
    let out = piv(&["qes", "--family", "HIII", "-m", "2", "-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["certificates"].as_array().unwrap().len(), 4);
    assert!(doc["failed"].as_array().unwrap().is_empty());
}

#[test]
fn nolog_csv() {
    let out = piv(&["nolog", "-n", "3", "--alpha-re", "0.2", "--energy", "50,inf", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,alpha_re,alpha_im,E,j,re_beta,im_beta"));
    assert!(lines.all(|l| l.split(',').count() == 7));
}
