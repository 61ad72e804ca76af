#![allow(clippy::approx_constant)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use revtidy::qsim::{Branch, ComputationSpec, RegisterLayout};
use revtidy::StateVector;
use tempfile::TempDir;

const AND_BLP: &str = "inputs 2\nw2 = and w0 w1\noutputs w2\n";
const AND_RVC: &str = "lines 3\nrole 0 input\nrole 1 input\nrole 2 output\ntoffoli 0 1 2\n";

fn revtidy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revtidy"))
        .args(args)
        .env_remove("REVTIDY_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn spec_file(dir: &TempDir, name: &str, branches: Vec<(StateVector, StateVector, StateVector)>) -> PathBuf {
    let spec = ComputationSpec::new(
        RegisterLayout::new(2, 2).unwrap(),
        None,
        branches.into_iter().map(|(i, o, a)| Branch::new(i, o, a)).collect(),
        1e-9,
    )
    .unwrap();
    write(dir, name, &spec.to_json())
}

fn zero() -> StateVector {
    StateVector::basis(2, 0)
}

fn one() -> StateVector {
    StateVector::basis(2, 1)
}

#[test]
fn compile_and_program() {
    let dir = TempDir::new().unwrap();
    let prog = write(&dir, "and.blp", AND_BLP);
    let out = dir.path().join("and.rvc");
    let o = revtidy(&["compile", s(&prog), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), AND_RVC);
}

#[test]
fn compile_xor_and_to_stdout() {
    let dir = TempDir::new().unwrap();
    let prog = write(&dir, "p.blp", "inputs 3\nw3 = xor w0 w1\nw4 = and w3 w2\noutputs w4\n");
    let o = revtidy(&["compile", s(&prog)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("lines 5\n"), "{text}");
    assert_eq!(
        text.lines()
            .filter(|l| !l.starts_with("lines") && !l.starts_with("role"))
            .count(),
        3
    );
}

#[test]
fn compile_rejects_empty_program() {
    let dir = TempDir::new().unwrap();
    let prog = write(&dir, "empty.blp", "inputs 2\n");
    let o = revtidy(&["compile", s(&prog)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no outputs"), "{}", stderr(&o));
}

#[test]
fn tidy_and_circuit_then_run() {
    let dir = TempDir::new().unwrap();
    let circ = write(&dir, "and.rvc", AND_RVC);
    let tidied = dir.path().join("tidy.rvc");
    let o = revtidy(&["tidy", s(&circ), "-o", s(&tidied)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&tidied).unwrap();
    assert!(text.ends_with("toffoli 0 1 2\ncnot 2 3\ntoffoli 0 1 2\n"), "{text}");
    assert!(text.starts_with("lines 4\n"));

    let o = revtidy(&["run", s(&tidied), "--input", "1100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1101\n");

    let again = dir.path().join("again.rvc");
    let o = revtidy(&["tidy", s(&tidied), "-o", s(&again)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&again).unwrap().starts_with("lines 5\n"));
}

#[test]
fn tidy_without_roles_fails() {
    let dir = TempDir::new().unwrap();
    let circ = write(&dir, "bare.rvc", "lines 3\ntoffoli 0 1 2\n");
    assert_eq!(revtidy(&["tidy", s(&circ)]).status.code(), Some(1));
}

#[test]
fn reverse_round_trips() {
    let dir = TempDir::new().unwrap();
    let circ = write(&dir, "c.rvc", "lines 3\nnot 0\ncnot 0 1\nfredkin 2 0 1\n");
    let o = revtidy(&["reverse", s(&circ)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "lines 3\nfredkin 2 0 1\ncnot 0 1\nnot 0\n");
}

#[test]
fn run_rejects_dirty_ancilla_and_bad_bits() {
    let dir = TempDir::new().unwrap();
    let circ = write(&dir, "and.rvc", AND_RVC);
    let tidied = write(
        &dir,
        "t.rvc",
        "lines 4\nrole 0 input\nrole 1 input\nrole 2 output\nrole 3 copy\ntoffoli 0 1 2\ncnot 2 3\ntoffoli 0 1 2\n",
    );
    assert_eq!(revtidy(&["run", s(&tidied), "--input", "1100"]).status.code(), Some(0));
    let o = revtidy(&["run", s(&tidied), "--input", "1101"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert_eq!(revtidy(&["run", s(&circ), "--input", "1x0"]).status.code(), Some(1));
    assert_eq!(revtidy(&["run", s(&circ), "--input", "11"]).status.code(), Some(1));
}

#[test]
fn analyze_orthogonal_inputs_exits_0() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "alice.spec.json",
        vec![(zero(), zero(), zero()), (one(), StateVector::plus(), one())],
    );
    let o = revtidy(&["analyze", s(&spec), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["classification"], "OrthogonalInputsNonOrthogonalOutputs");
    assert_eq!(report["tidy_possible"], true);
    assert!(report["certificate"].is_null());
}

#[test]
fn analyze_canonical_spec_exits_2() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "bob.spec.json",
        vec![(zero(), zero(), zero()), (StateVector::plus(), one(), zero())],
    );
    let o = revtidy(&["analyze", s(&spec), "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["certificate"]["tidy_residual_abs"], 0.707106781187);
    assert_eq!(report["certificate"]["pair"], serde_json::json!([0, 1]));

    let again = revtidy(&["analyze", s(&spec), "--json"]);
    assert_eq!(again.stdout, o.stdout);

    let text = revtidy(&["analyze", s(&spec)]);
    assert_eq!(text.status.code(), Some(2));
    assert!(stdout(&text).contains("tidy possible:  NO"));
}

#[test]
fn analyze_irreversible_spec_exits_1() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "lossy.spec.json",
        vec![(zero(), zero(), zero()), (one(), zero(), zero())],
    );
    let o = revtidy(&["analyze", s(&spec)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("reversible:     NO (pair (0, 1)"), "{}", stdout(&o));
}

#[test]
fn analyze_rejects_malformed_specs() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        "{\"layout\": {\"out_dim\": 2, \"aux_dim\": 2}, \"branches\": [], \"extra\": 1}",
    );
    assert_eq!(revtidy(&["analyze", s(&bad)]).status.code(), Some(1));
    let unnormalized = write(
        &dir,
        "norm.json",
        "{\"layout\": {\"out_dim\": 1, \"aux_dim\": 1}, \"branches\": [{\"input\": [[2,0]], \"output\": [[1,0]], \"aux\": [[1,0]]}]}",
    );
    let o = revtidy(&["analyze", s(&unnormalized)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("branch 0 input"), "{}", stderr(&o));
    assert_eq!(revtidy(&["analyze", "/nonexistent/spec.json"]).status.code(), Some(1));
}

#[test]
fn tolerance_flag_and_environment() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "bob.spec.json",
        vec![(zero(), zero(), zero()), (StateVector::plus(), one(), zero())],
    );
    assert_eq!(revtidy(&["analyze", s(&spec), "--tol", "0.8"]).status.code(), Some(1));
    assert_eq!(revtidy(&["analyze", s(&spec), "--tol", "-1"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_revtidy"))
        .args(["analyze", s(&spec)])
        .env("REVTIDY_TOL", "nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("REVTIDY_TOL"));
}

#[test]
fn tidier_writes_procedure() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "alice.spec.json",
        vec![(zero(), zero(), zero()), (one(), StateVector::plus(), one())],
    );
    let out = dir.path().join("proc.json");
    let o = revtidy(&["tidier", s(&spec), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let proc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(proc["kind"], "ModifiedBennett");
    assert_eq!(proc["registers"].as_array().unwrap().len(), 4);
    assert!(proc["fidelities"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f.as_f64().unwrap() >= 1.0 - 1e-9));

    let bob = spec_file(
        &dir,
        "bob.spec.json",
        vec![(zero(), zero(), zero()), (StateVector::plus(), one(), zero())],
    );
    assert_eq!(revtidy(&["tidier", s(&bob), "-o", s(&out)]).status.code(), Some(2));
}

#[test]
fn energy_reports_erasure_cost() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "bob.spec.json",
        vec![(zero(), zero(), zero()), (StateVector::plus(), one(), zero())],
    );
    let o = revtidy(&["energy", s(&spec), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["landauer_cost_kTln2"], 1.0);
    assert_eq!(v["tidy_possible"], false);
}

#[test]
fn demos_and_usage_errors() {
    for name in ["noclone", "bennett", "warehouse"] {
        let o = revtidy(&["demo", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
    assert!(stdout(&revtidy(&["demo", "noclone"])).contains("0.500000000000"));
    assert_eq!(revtidy(&["demo", "teleport"]).status.code(), Some(1));
    assert_eq!(revtidy(&["analyze"]).status.code(), Some(1));
    assert_eq!(revtidy(&["compile", "x.blp", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(revtidy(&["--version"]).status.code(), Some(0));
}
