//! End-to-end tests of the command-line surface: exit codes, golden
//! output for the worked example, determinism, and scenario round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cechweil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_passes_on_fixtures() {
    for name in ["green_p1.scn", "green_rank2.scn"] {
        let out = run(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {out:?}");
        assert!(stdout_of(&out).starts_with("ok: "));
    }
}

#[test]
fn checks_pass_on_the_worked_example() {
    for cmd in ["green-check", "mc-check", "simplicial-check", "admissible-check"] {
        let out = run(&[cmd, fixture("green_p1.scn").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd} failed: {out:?}");
        assert!(stdout_of(&out).contains("pass"));
    }
}

#[test]
fn checks_pass_on_the_synthetic_example() {
    for cmd in ["green-check", "simplicial-check", "admissible-check"] {
        let out = run(&[cmd, fixture("green_rank2.scn").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd} failed: {out:?}");
    }
}

#[test]
fn chern_golden_output() {
    let out = run(&["chern", fixture("green_p1.scn").to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "\
total degree 2
p=0 (U1): 0
p=0 (U2): 0
p=1 (U1,U1): 0
p=1 (U1,U2): -1/z dz
p=1 (U2,U1): 1/z dz
p=1 (U2,U2): 0
p=2 (U1,U1,U1): 0
p=2 (U1,U1,U2): 0
p=2 (U1,U2,U1): 0
p=2 (U1,U2,U2): 0
p=2 (U2,U1,U1): 0
p=2 (U2,U1,U2): 0
p=2 (U2,U2,U1): 0
p=2 (U2,U2,U2): 0
cocycle: pass
";
    assert_eq!(stdout_of(&out), expected);
}

#[test]
fn integrate_golden_output() {
    let out = run(&["integrate", fixture("green_p1.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("p=1 (U1,U2): 1/z dz"));
    assert!(text.contains("p=1 (U2,U1): -1/z dz"));
}

#[test]
fn chern_on_synthetic_fixture_gives_log_derivatives() {
    // the representative picks up -dlog of each skyscraper point visible
    // on the overlap: one point on Ua∩Ub, both on Ua∩Uc
    let out = run(&["chern", fixture("green_rank2.scn").to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("p=1 (Ua,Ub): -(1/(z - 2)) dz"));
    assert!(text.contains("p=1 (Ua,Uc): -((2*z - 3)/(z - 1)/(z - 2)) dz"));
    assert!(text.contains("p=1 (Ub,Uc): -(1/(z - 1)) dz"));
    assert!(text.contains("cocycle: pass"));
}

#[test]
fn integrate_rejects_non_glued_families() {
    let dir = std::env::temp_dir().join("cechweil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    // a family with a nonzero degree-0 component whose restriction does not
    // match the pairs violates the gluing condition
    let text = std::fs::read_to_string(fixture("green_p1.scn"))
        .unwrap()
        .replace("degree = 2", "degree = 1")
        .replace("omega (U1,U2) = -(1/z) dz ^ dt1", "omega (U1) = dz")
        .replace("omega (U2,U1) = (1/z) dz ^ dt1", "");
    let path = dir.join("bad_family.scn");
    std::fs::write(&path, text).unwrap();
    let out = run(&["integrate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("gluing"), "stderr: {err}");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["chern", fixture("green_p1.scn").to_str().unwrap()]);
    let b = run(&["chern", fixture("green_p1.scn").to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["curvature", fixture("green_rank2.scn").to_str().unwrap()]);
    let b = run(&["curvature", fixture("green_rank2.scn").to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupted_fixture_exits_2_with_named_error() {
    let dir = std::env::temp_dir().join("cechweil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    // rank mismatch: the transition matrix no longer fits the declared rank
    let text = std::fs::read_to_string(fixture("green_p1.scn"))
        .unwrap()
        .replace("rank (U1,U2) = 1 1", "rank (U1,U2) = 2 2");
    let path = dir.join("rank_mismatch.scn");
    std::fs::write(&path, text).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("error"), "stderr: {err}");
    assert!(
        err.contains("shape") || err.contains("matrix"),
        "error does not name the offending matrix: {err}"
    );
    // empty file is a parse error
    let empty = dir.join("empty.scn");
    std::fs::write(&empty, "").unwrap();
    let out = run(&["validate", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_check_exits_1() {
    let dir = std::env::temp_dir().join("cechweil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    // break the degree-1 splitting entry: S stays invertible but is no
    // longer a chain map, so green-check fails (while loading still works)
    let text = std::fs::read_to_string(fixture("green_p1.scn"))
        .unwrap()
        .replace("S (U1,U2) (U2) 1 = [z]", "S (U1,U2) (U2) 1 = [1]");
    let path = dir.join("broken_green.scn");
    std::fs::write(&path, text).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "still loads");
    let out = run(&["green-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("FAIL"));
}

#[test]
fn explicit_witnesses_are_accepted() {
    let dir = std::env::temp_dir().join("cechweil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    // a single open with the trivial rank-1 bundle; the explicit zero-width
    // witnesses make every comparison an isomorphism of full quotients
    let text = "\
[meta]
name = one-open
depth = 1

[opens]
U

[chart U]
vars = x

[complex]
stars = 1
rank (U) = 1
rank (U,U) = 1
t (U,U) 0 0 = [1]
t (U,U) 1 0 = [1]

[green]
L (U,U) (U) = none
S (U,U) (U) 0 = [1]

[connections]
local U 0 = [0]

[witnesses]
A (U,U) 0 0 = []
B (U,U) 0 0 = []
A (U,U) 1 0 = []
B (U,U) 1 0 = []
";
    let path = dir.join("one_open.scn");
    std::fs::write(&path, text).unwrap();
    for cmd in ["validate", "green-check", "simplicial-check", "admissible-check"] {
        let out = run(&[cmd, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {out:?}");
    }
}

#[test]
fn verbose_env_prints_all_violations() {
    let dir = std::env::temp_dir().join("cechweil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    // break both nontrivial splittings so there are several violations
    let text = std::fs::read_to_string(fixture("green_p1.scn"))
        .unwrap()
        .replace("S (U1,U2) (U2) 1 = [z]", "S (U1,U2) (U2) 1 = [1]")
        .replace("S (U2,U1) (U2) 1 = [z]", "S (U2,U1) (U2) 1 = [1]");
    let path = dir.join("two_breaks.scn");
    std::fs::write(&path, text).unwrap();
    let quiet = run(&["green-check", path.to_str().unwrap()]);
    let loud = Command::new(env!("CARGO_BIN_EXE_cechweil"))
        .args(["green-check", path.to_str().unwrap()])
        .env("CECHWEIL_VERBOSE", "1")
        .output()
        .unwrap();
    assert_eq!(quiet.status.code(), Some(1));
    assert_eq!(loud.status.code(), Some(1));
    let quiet_lines = stdout_of(&quiet).lines().count();
    let loud_lines = stdout_of(&loud).lines().count();
    assert!(
        loud_lines > quiet_lines,
        "verbose mode should print more: {quiet_lines} vs {loud_lines}"
    );
}

#[test]
fn finite_model_subcommands() {
    let out = run(&["finite-model", "apply-e", "1 0; 0 0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("dimension 1"));

    let out = run(&["finite-model", "weq", "1 0", "1 0; 0 0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("yes"));

    let out = run(&["finite-model", "weq", "0", "1", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["finite-model", "witness", "1 0", "1 0; 0 0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("found"));

    let out = run(&["finite-model", "invariant", "2 0; 0 0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("x - 2"));

    let out = run(&["finite-model", "invariant", "0 0; 0 0"]);
    assert!(stdout_of(&out).contains("class of zero"));

    // not a morphism of pairs: f φ ≠ ψ f
    let out = run(&["finite-model", "weq", "1", "0", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
