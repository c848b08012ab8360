use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hodge_spectra::exactla::Rational;
use hodge_spectra::format::write_package;
use hodge_spectra::torus::{torus_package, TorusSpec};
use hodge_spectra::verifier::standard_mutations;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge-spectra")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn square(dir: &TempDir, n: usize) -> PathBuf {
    let rows: Vec<Vec<String>> =
        (0..2 * n).map(|i| (0..2 * n).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect();
    write(dir, "square.json", &serde_json::json!({ "n": n, "basis": rows }).to_string())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_text_lists_the_first_lines() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 1);
    let out = run(&["spectrum", "--input", s(&t), "--mu-max", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("4π²·1  4   4   8   4"), "{text}");
    assert!(text.contains("4π²·2  4   4   8   4"), "{text}");
    assert!(!text.contains("4π²·3"));
}

#[test]
fn zero_bound_leaves_only_harmonic_forms() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 2);
    let out = run(&["spectrum", "--input", s(&t), "--mu-max", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lines = v["lines"].as_array().unwrap();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["mu"], "0");
    assert_eq!(lines[0]["modes"], 1);
    assert_eq!(lines[0]["b"]["2"], 6);
}

#[test]
fn csv_has_a_header_and_one_row_per_line() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 1);
    let text = stdout(&run(&["spectrum", "--input", s(&t), "--format", "csv", "--approx"]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "mu,lambda_approx,N,b0,b1,b2");
    assert_eq!(rows[2], "1,39.478418,4,4,8,4");
    assert_eq!(rows.len(), 3);
}

#[test]
fn diamond_of_z4_unit_line() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 2);
    let out = run(&["diamond", "--input", s(&t), "--mu", "1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for p in 0..3 {
        for q in 0..3 {
            let expected = [[8, 16, 8], [16, 32, 16], [8, 16, 8]][p][q];
            assert_eq!(v["h"][format!("{p},{q}")], expected);
        }
    }
}

#[test]
fn selected_checks_only() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 1);
    let out = run(&["verify", "--input", s(&t), "--checks", "T2.b", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let by_check = v["summary"]["by_check"].as_array().unwrap();
    assert_eq!(by_check.len(), 1);
    assert_eq!(by_check[0]["check"], "T2.b");
    assert!(v["summary"]["total"].as_u64().unwrap() > 0);
}

#[test]
fn export_then_verify_reproduces_the_report() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 1);
    let pkg = dir.path().join("pkg.json");
    assert_eq!(code(&run(&["export", "--input", s(&t), "--mu-max", "2", "--out", s(&pkg)])), 0);
    let direct = run(&["verify", "--input", s(&t), "--mu-max", "2", "--format", "json"]);
    let imported = run(&["verify", "--input", s(&pkg), "--mode", "package", "--format", "json"]);
    assert_eq!(code(&imported), 0);
    assert_eq!(direct.stdout, imported.stdout);
}

#[test]
fn harmonic_only_export_round_trips() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 1);
    let pkg = dir.path().join("pkg.json");
    assert_eq!(code(&run(&["export", "--input", s(&t), "--mu-max", "1/2", "--out", s(&pkg)])), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&pkg).unwrap()).unwrap();
    assert_eq!(v["eigenvalues"], serde_json::json!(["0"]));
    assert_eq!(code(&run(&["verify", "--input", s(&pkg), "--mode", "package"])), 0);
}

#[test]
fn mutated_package_fails_verification() {
    let dir = TempDir::new().unwrap();
    let lines = TorusSpec::standard(1).enumerate_modes(&Rational::ONE).unwrap();
    let pkg = torus_package(1, &lines).unwrap().package;
    let mus: Vec<Rational> = lines.iter().map(|l| l.mu.clone()).collect();
    let bad = standard_mutations(1, 1)[0].apply(&pkg).unwrap();
    let path = write(&dir, "bad.json", &write_package(&bad, Some(&mus)).unwrap());
    let out = run(&["verify", "--input", s(&path), "--mode", "package"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("failed"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let t = square(&dir, 1);
    assert_eq!(code(&run(&["spectrum", "--input", s(&t), "--mu-max", "1//2"])), 2);
    assert_eq!(code(&run(&["verify", "--input", s(&t), "--checks", "T9"])), 2);
    let garbled = write(&dir, "garbled.json", "{\"n\": 1, \"basis\": [[1, 0]]");
    assert_eq!(code(&run(&["spectrum", "--input", s(&garbled)])), 2);
    let singular = write(&dir, "singular.json", r#"{"n":1,"basis":[["1","2"],["2","4"]]}"#);
    assert_eq!(code(&run(&["spectrum", "--input", s(&singular)])), 3);
    assert_eq!(code(&run(&["diamond", "--input", s(&t), "--mu", "3"])), 4);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["spectrum", "--input", s(&missing)])), 5);
    let unwritable = dir.path().join("no/such/dir/out.txt");
    assert_eq!(code(&run(&["spectrum", "--input", s(&t), "--out", s(&unwritable)])), 5);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "shear.json", r#"{"n":1,"basis":[["1","1/2"],["0","1"]]}"#);
    let a = run(&["verify", "--input", s(&t), "--mu-max", "3", "--format", "json"]);
    let b = run(&["verify", "--input", s(&t), "--mu-max", "3", "--format", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
