#![cfg(feature = "cli")]

use std::path::Path;
use std::process::{Command, Output};

fn witness(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witness"))
        .args(args)
        .current_dir(dir)
        .env_remove("WITNESS_SEED")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn build_then_verify() {
    let d = tempfile::tempdir().unwrap();
    let o = witness(&["build", "--q", "2", "--out", "q2.json", "--svg", "q2.svg"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(d.path().join("q2.svg")).unwrap();
    assert_eq!(svg.matches("data-edge").count(), 7);

    let o = witness(&["verify", "--in", "q2.json", "--target-norm", "p:2", "--out", "r.json"], d.path());
    assert_eq!(code(&o), 0);
    let o = witness(&["verify", "--in", "q2.json", "--target-norm", "p:1.5", "--grid", "90"], d.path());
    assert_eq!(code(&o), 0);
    let o = witness(
        &["verify", "--in", "q2.json", "--target-norm", "p:inf", "--mode", "falsify", "--restarts", "200"],
        d.path(),
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn seed_from_env_matches_flag() {
    let d = tempfile::tempdir().unwrap();
    witness(&["build", "--q", "2", "--out", "q2.json"], d.path());
    let args = ["verify", "--in", "q2.json", "--target-norm", "p:1", "--mode", "falsify", "--restarts", "50"];
    let mut flagged = args.to_vec();
    flagged.extend(["--seed", "5"]);
    let a = witness(&flagged, d.path());
    let b = Command::new(env!("CARGO_BIN_EXE_witness"))
        .args(args)
        .current_dir(d.path())
        .env("WITNESS_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = witness(&args, d.path());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn errors_exit_one() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&witness(&["verify", "--in", "missing.json"], d.path())), 1);
    std::fs::write(d.path().join("bad.json"), "{\"points\": 3}").unwrap();
    assert_eq!(code(&witness(&["verify", "--in", "bad.json"], d.path())), 1);
    assert_eq!(code(&witness(&["build", "--q", "2", "--eps", "0.1"], d.path())), 1);
    assert_eq!(code(&witness(&["build", "--q", "1/0"], d.path())), 1);
    assert_eq!(code(&witness(&["build", "--q", "2", "--source-norm", "p:0.5"], d.path())), 1);
    assert_eq!(code(&witness(&["frobnicate"], d.path())), 1);
    assert_eq!(code(&witness(&["--help"], d.path())), 0);
}

#[test]
fn nested_division_needs_inductive() {
    let d = tempfile::tempdir().unwrap();
    witness(&["build", "--q", "1/3", "--out", "s.json"], d.path());
    let o = witness(&["verify", "--in", "s.json", "--target-norm", "p:3", "--grid", "90"], d.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--inductive"));
    let o = witness(&["verify", "--in", "s.json", "--target-norm", "p:3", "--grid", "90", "--inductive"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn figure5_stats_equilateral() {
    let d = tempfile::tempdir().unwrap();
    let o = witness(&["figure5", "--source-norm", "p:2", "--out", "f.json", "--svg", "f.svg"], d.path());
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(d.path().join("f.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 11);

    let o = witness(&["stats", "--max-m", "2", "--max-n", "2", "--csv"], d.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("q,points,edges,depth"));
    assert!(text.contains("2/1,5,7,2"));

    let o = witness(&["equilateral4", "--target-norm", "p:inf", "--restarts", "20"], d.path());
    assert_eq!(code(&o), 0);
    let o = witness(&["equilateral4", "--target-norm", "p:2", "--n", "3", "--restarts", "20"], d.path());
    assert_eq!(code(&o), 0);
}
