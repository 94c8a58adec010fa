use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pcforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcforge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn generate(dir: &TempDir, family: &str, param: &str) -> String {
    let file = format!("{family}_{param}.cnf");
    let out = pcforge(&["gen", family, param, "-o", &file], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn urc_failure_reports_the_guard_witness() {
    let dir = TempDir::new().unwrap();
    let file = generate(&dir, "psi_qhorn", "3");
    let out = pcforge(&["check", "urc", &file, "--witness"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"], false);
    assert_eq!(r["command"], "check");
    assert_eq!(r["witness"].as_array().unwrap().len(), 3);
    let digest = r["inputs"][&file].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}

#[test]
fn gamma_variants_separate_pc_from_urc() {
    let dir = TempDir::new().unwrap();
    let prime = generate(&dir, "gamma_prime", "3");
    for property in ["pc", "urc", "pc-dr"] {
        let out = pcforge(&["check", property, &prime], dir.path());
        assert_eq!(out.status.code(), Some(0), "{property}");
        assert_eq!(report(&out)["verdict"], true);
    }
    let dprime = generate(&dir, "gamma_dprime", "3");
    assert_eq!(pcforge(&["check", "urc", &dprime], dir.path()).status.code(), Some(0));
    let out = pcforge(&["check", "pc", &dprime, "--witness"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["literal"].is_i64());
    assert_eq!(pcforge(&["check", "pc-dr", &dprime], dir.path()).status.code(), Some(1));
}

#[test]
fn gen_without_output_prints_dimacs() {
    let dir = TempDir::new().unwrap();
    let out = pcforge(&["gen", "gamma_dprime", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    assert_eq!(header.split_whitespace().nth(3), Some("13"));
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), 13);
}

#[test]
fn gen_companions_for_psi_qhorn() {
    let dir = TempDir::new().unwrap();
    let out = pcforge(&["gen", "psi_qhorn", "3", "-o", "q.cnf", "--companions"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["companions"]["ubar"].is_array());
}

#[test]
fn qhorn_compile_verifies() {
    let dir = TempDir::new().unwrap();
    fixture(&dir, "two_sat.cnf", "p cnf 3 3\n1 2 0\n-2 3 0\n-1 -3 0\n");
    let out = pcforge(&["qhorn", "compile", "two_sat.cnf", "-o", "out.cnf", "--verify"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["urc"], true);
    assert_eq!(r["encoding"], true);
    let enc = pcforge(&["encodes", "out.cnf", "two_sat.cnf"], dir.path());
    assert_eq!(enc.status.code(), Some(0));
}

#[test]
fn qhorn_recognize_and_sat() {
    let dir = TempDir::new().unwrap();
    fixture(&dir, "q.cnf", "p cnf 2 2\n1 2 0\n-1 -2 0\n");
    fixture(&dir, "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    fixture(&dir, "wide.cnf", "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n");
    let out = pcforge(&["qhorn", "recognize", "q.cnf"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["valuation"].is_object());
    let out = pcforge(&["qhorn", "recognize", "wide.cnf"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["valuation"], "NOT-QHORN");
    assert_eq!(pcforge(&["qhorn", "sat", "q.cnf"], dir.path()).status.code(), Some(0));
    let out = pcforge(&["qhorn", "sat", "unsat.cnf"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"], "UNSAT");
}

#[test]
fn unit_propagation_reports_derived_literals() {
    let dir = TempDir::new().unwrap();
    fixture(&dir, "f.cnf", "p cnf 3 2\n1 2 0\n-2 3 0\n");
    let out = pcforge(&["up", "f.cnf", "--assume", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let derived: Vec<i64> = report(&out)["derived"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .collect();
    assert_eq!(derived, [-1, 2, 3]);
    let out = pcforge(&["up", "f.cnf", "--assume", "-1,-3"], dir.path());
    assert_eq!(report(&out)["derived"], "CONFLICT");
}

#[test]
fn primes_equiv_and_absorb() {
    let dir = TempDir::new().unwrap();
    fixture(&dir, "f.cnf", "p cnf 3 2\n1 2 0\n-2 3 0\n");
    fixture(&dir, "g.cnf", "p cnf 3 3\n1 2 0\n-2 3 0\n1 3 0\n");
    let out = pcforge(&["primes", "f.cnf", "-o", "p.cnf"], dir.path());
    assert_eq!(report(&out)["count"], 3);
    assert_eq!(pcforge(&["equiv", "p.cnf", "g.cnf"], dir.path()).status.code(), Some(0));
    fixture(&dir, "h.cnf", "p cnf 3 1\n1 2 0\n");
    assert_eq!(pcforge(&["equiv", "f.cnf", "h.cnf"], dir.path()).status.code(), Some(1));
    assert_eq!(pcforge(&["absorb", "1,3", "f.cnf"], dir.path()).status.code(), Some(0));
    assert_eq!(pcforge(&["absorb", "-1,3", "f.cnf"], dir.path()).status.code(), Some(2));
}

#[test]
fn reduce_keeps_pc() {
    let dir = TempDir::new().unwrap();
    fixture(&dir, "g.cnf", "p cnf 3 4\n1 2 0\n-2 3 0\n1 3 0\n1 2 3 0\n");
    let out = pcforge(&["reduce", "pc", "g.cnf", "--seed", "4", "-o", "r.cnf"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["after"], 2);
    assert_eq!(pcforge(&["check", "pc", "r.cnf"], dir.path()).status.code(), Some(0));
    assert_eq!(pcforge(&["equiv", "r.cnf", "g.cnf"], dir.path()).status.code(), Some(0));
}

#[test]
fn dual_rail_file_carries_meta_map() {
    let dir = TempDir::new().unwrap();
    fixture(&dir, "f.cnf", "p cnf 2 1\n1 -2 0\n");
    let out = pcforge(&["dr", "f.cnf", "-o", "dr.cnf"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["meta_vars"], 4);
    let text = std::fs::read_to_string(dir.path().join("dr.cnf")).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("c meta")).count(), 4);
}

#[test]
fn exit_codes_for_usage_and_limits() {
    let dir = TempDir::new().unwrap();
    let file = generate(&dir, "gamma_prime", "3");
    assert_eq!(pcforge(&["check", "pc", &file, "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(pcforge(&["check", "pc", "missing.cnf"], dir.path()).status.code(), Some(2));
    fixture(&dir, "bad.cnf", "p cnf 2 1\n1 x 0\n");
    assert_eq!(pcforge(&["check", "pc", "bad.cnf"], dir.path()).status.code(), Some(2));
    let out = pcforge(&["--limit", "11", "check", "pc", &file, "--strategy", "exhaustive"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(report(&out)["error"].is_string());
    let out = pcforge(&["--limit", "12", "check", "pc", &file, "--strategy", "exhaustive"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn suite_subset_passes() {
    let dir = TempDir::new().unwrap();
    let out = pcforge(&["suite", "--only", "1,2,3", "--jobs", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["criteria"].as_array().unwrap().len(), 3);
    assert_eq!(r["passed"], true);
}
