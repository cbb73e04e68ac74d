use std::path::Path;
use std::process::{Command, Output};

use lelonglab::format::CurrentJson;
use lelonglab_core::corpus::{periodic_fixtures, standard_corpus, Case};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lelonglab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    })
}

fn write_case(dir: &Path, case: &Case) -> String {
    let path = dir.join(format!("{}.json", case.id.replace('/', "_")));
    let text = serde_json::to_string_pretty(&CurrentJson::from_current(&case.current)).unwrap();
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn corpus_case(id: &str) -> Case {
    standard_corpus(42)
        .unwrap()
        .into_iter()
        .chain(periodic_fixtures().unwrap())
        .find(|c| c.id == id)
        .unwrap()
}

const CONSTANT_LAMBDA_ONE: &str = r#"{
  "lambda": {"value": 1, "class": "rational", "a": 1, "b": 1},
  "atoms": [{"alpha": [0.5, 0], "weight": 1, "spec": {"type": "fourier", "b": 1, "a0": 1}}]
}"#;

#[test]
fn mass_of_constant_current_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    std::fs::write(&input, CONSTANT_LAMBDA_ONE).unwrap();
    let o = run(&["mass", "--input", input.to_str().unwrap(), "--r", "1"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let q = v["quadrature"]["value"].as_f64().unwrap();
    // (π/2)(1 + 4) with |α|² = 1/4.
    assert!((q - 2.5 * std::f64::consts::PI).abs() < 1e-9, "{q}");
    assert!(v["discrepancy"].as_f64().unwrap() < 1e-6);
    assert!((v["quadrature"]["nu"].as_f64().unwrap() - 2.5).abs() < 1e-9);
}

#[test]
fn mass_without_closed_form_reports_null() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), &corpus_case("pos-sqrt2m1-poisson"));
    let o = run(&["mass", "--input", &input, "--r", "0.5"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert!(v["closed_form"].is_null() && v["discrepancy"].is_null());
    assert!(v["quadrature"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, CONSTANT_LAMBDA_ONE.replace("\"weight\": 1", "\"weight\": \"heavy\"")).unwrap();
    let o = run(&["mass", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("atoms[0].weight"), "{err}");

    std::fs::write(&input, CONSTANT_LAMBDA_ONE.replace("\"a0\": 1", "\"a0\": 0.5")).unwrap();
    let o = run(&["mass", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("atoms[0]: harmonic spec is not normalized"));

    let o = run(&["mass", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn negative_single_strip_has_no_mass_near_origin() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), &corpus_case("neg-1-single"));
    let o = run(&["mass", "--input", &input, "--r", "0.1"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["quadrature"]["value"].as_f64().unwrap(), 0.0);
    let o = run(&["mass", "--input", &input, "--r", "1"]);
    assert!(stdout_json(&o)["quadrature"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn lelong_writes_schedule_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    std::fs::write(&input, CONSTANT_LAMBDA_ONE).unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "lelong",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--steps",
        "5",
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(out.join("schedule.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,nu,err,monotone_violation");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let nu: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((nu - 2.5).abs() < 1e-9);
    }
    let v = stdout_json(&o);
    assert_eq!(v["diverges"], Value::Bool(false));
    assert_eq!(v["monotone_ok"], Value::Bool(true));

    let closed = run(&[
        "lelong",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--steps",
        "5",
        "--engine",
        "closed-form",
    ]);
    assert!(closed.status.success());
    let a = v["limit_estimate"].as_f64().unwrap();
    let b = stdout_json(&closed)["limit_estimate"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn bad_schedule_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    std::fs::write(&input, CONSTANT_LAMBDA_ONE).unwrap();
    let o = run(&["lelong", "--input", input.to_str().unwrap(), "--ratio", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_case_and_tolerance() {
    let o = run(&["verify", "--case", "pos-1-constant"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["case_id"], "pos-1-constant");
    assert_eq!(reports[0]["verdict"], "pass");
    assert!(String::from_utf8_lossy(&o.stderr).contains("pos-1-constant"));

    let o = run(&["verify", "--case", "pos-1-constant", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)[0]["verdict"], "fail");

    let o = run(&["verify", "--case", "lemma-ineq1"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)[0]["claim"], "LemmaBound");

    let o = run(&["verify", "--case", "no-such-case"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_user_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), &corpus_case("neg-1-single"));
    let o = run(&["verify", "--input", &input]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)[0]["claim"], "ZeroLelong");
}

#[test]
fn leafplot_draws_one_strand_per_loop() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "leafplot",
        "--lambda",
        "1/2",
        "--alpha",
        "0.5,0.1",
        "--loops",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["strands"], 3);
    let svg = std::fs::read_to_string(dir.path().join("torus.svg")).unwrap();
    assert_eq!(svg.matches("<path class=\"strand\"").count(), 3);
    assert!(!dir.path().join("nu.svg").exists());

    let input = write_case(dir.path(), &corpus_case("neg-1-family"));
    let o = run(&["leafplot", "--input", &input, "--atom", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let nu = std::fs::read_to_string(dir.path().join("nu.svg")).unwrap();
    assert!(nu.contains("<polyline class=\"nu\""));

    let o = run(&["leafplot", "--input", &input, "--atom", "99", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn leafplot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |d: &Path| {
        run(&["leafplot", "--lambda", "0.41421356", "--alpha", "0.3,0.2", "--out", d.to_str().unwrap()])
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(args(&a).status.success() && args(&b).status.success());
    assert_eq!(
        std::fs::read(a.join("torus.svg")).unwrap(),
        std::fs::read(b.join("torus.svg")).unwrap()
    );
}

#[test]
fn sweep_grid_matches_lelong() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep", "--steps", "6", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), text);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);

    // The λ = 1 constant row against a standalone `lelong` run.
    let input = dir.path().join("c.json");
    let current = lelonglab_core::corpus::Family::Constant
        .build(lelonglab_core::Eigenvalue::rational(1, 1).unwrap())
        .unwrap();
    std::fs::write(&input, serde_json::to_string(&CurrentJson::from_current(&current)).unwrap()).unwrap();
    let l = run(&["lelong", "--input", input.to_str().unwrap(), "--steps", "6", "--out", dir.path().to_str().unwrap()]);
    let v = stdout_json(&l);
    let row: Vec<&str> = rows.iter().find(|r| r.starts_with("1,constant,")).unwrap().split(',').collect();
    let nu_last = v["nus"][5].as_f64().unwrap();
    assert_eq!(row[5].parse::<f64>().unwrap().to_bits(), nu_last.to_bits());

    // λ = −1 constant strip sits away from the origin: ν → 0, no divergence.
    let neg: Vec<&str> = rows.iter().find(|r| r.starts_with("-1,constant,")).unwrap().split(',').collect();
    assert_eq!(neg[5], "0");
    assert_eq!(neg[11], "false");
}

#[test]
fn sweep_rejects_unknown_family() {
    let o = run(&["sweep", "--families", "constant,wild"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wild"));
}

#[test]
fn thread_count_does_not_change_output() {
    let sweep = |threads: &str| {
        let o = bin()
            .args(["sweep", "--steps", "5", "--lambdas", "1/2,-1/2"])
            .env("LELONGLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(sweep("1"), sweep("4"));

    let o = bin().args(["sweep", "--steps", "2"]).env("LELONGLAB_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
