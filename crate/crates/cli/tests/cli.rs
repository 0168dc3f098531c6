use std::process::{Command, Output};

use hopf_galois::etale_fields::{build_cyclotomic, AlgebraFile};

fn hgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_fixtures_and_scenarios() {
    let out = hgs(&["list-fixtures"]);
    assert!(out.status.success());
    for name in ["cyclotomic-3", "cyclotomic-4", "cyclotomic-5", "cyclotomic-7", "kummer-cubic-5", "d3-abstract"] {
        assert!(stdout(&out).contains(name), "{name}");
    }
    let out = hgs(&["list-scenarios"]);
    assert!(stdout(&out).contains("kummer-counterexample"));
}

#[test]
fn counterexample_scenario_passes_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let md = dir.path().join("r.md");
    let out = hgs(&[
        "run",
        "kummer-counterexample",
        "--report",
        report.to_str().unwrap(),
        "--markdown",
        md.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    let ce = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "counterexample p=5").unwrap();
    assert_eq!(ce["details"]["overLambdaG"]["status"], "NotFree");
    assert_eq!(ce["details"]["overAssociatedOrder"]["status"], "Free");
    assert_eq!(ce["details"]["witnessInAssociatedOrder"], true);
    assert_eq!(ce["details"]["witnessInLambdaG"], false);
    assert!(std::fs::read_to_string(&md).unwrap().contains("**PASS**"));
}

#[test]
fn reports_are_reproducible() {
    let a = hgs(&["run", "cyclotomic7-tame"]);
    let b = hgs(&["run", "cyclotomic7-tame", "--sequential"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("timingMs"));
}

#[test]
fn wild_prime_fails_with_exit_one() {
    let out = hgs(&["run", "cyclotomic9-wild"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
    assert!(v["checks"][0]["error"].as_str().unwrap().contains("wild ramification"));
}

#[test]
fn input_errors_exit_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "fixture = \"cyclotomic-3\"\nprimes = [3]\nidealPowers = \"x\"\n").unwrap();
    let out = hgs(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("idealPowers"), "{}", stderr(&out));

    std::fs::write(&path, "fixture = \"cyclotomic-3\"\nprimes = [3]\n[bounds]\nenumeration = 0\n").unwrap();
    let out = hgs(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bounds.enumeration"));

    let out = hgs(&["run", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = hgs(&["describe", "no-such-fixture", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown fixture"));
}

#[test]
fn search_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hgs"))
        .args(["run", "cyclotomic7-tame"])
        .env("HGS_SEARCH_BOUND", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exceeds the bound 100"), "{}", stderr(&out));
    let out = Command::new(env!("CARGO_BIN_EXE_hgs"))
        .args(["run", "cyclotomic7-tame"])
        .env("HGS_SEARCH_BOUND", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixture_files_resolve_relative_to_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let ext = build_cyclotomic(5).unwrap();
    std::fs::write(dir.path().join("c5.toml"), AlgebraFile::from_algebra(&ext).to_toml()).unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "fixture = \"c5.toml\"\nprimes = [5]\nidealPowers = [0, 1]\nformat = \"markdown\"\n").unwrap();
    let out = hgs(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("# Scenario report"));
}

#[test]
fn describe_and_enumerate() {
    let out = hgs(&["describe", "cyclotomic-7", "0"]);
    assert!(stdout(&out).contains("classical"));
    let out = hgs(&["enumerate", "kummer-cubic-5", "--commutative-only"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.contains("C_6")));
    let out = hgs(&["enumerate", "d3-abstract"]);
    assert_eq!(stdout(&out).lines().count(), 5);
}
