use std::process::Command;

use regulab::verify::{emit, parse_json, run_all, run_scenario, Format, Scenario, SCENARIOS};

fn verify() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verify"))
}

fn reports_part(stdout: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(stdout).unwrap();
    v["reports"].take()
}

#[test]
fn list_prints_every_scenario() {
    let out = verify().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), SCENARIOS);
}

#[test]
fn passing_run_exits_zero() {
    let out = verify().args(["run", "eta_closed_vs_zeta"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reports = parse_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].pass);
}

#[test]
fn failing_tolerance_exits_one() {
    let out = verify().args(["run", "eta_closed_vs_zeta", "--tolerance", "1e-300"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_two() {
    let out = verify().args(["run", "no_such_scenario"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"params": {"unknown_field": 1}}"#).unwrap();
    let out = verify().args(["run", "eta_closed_vs_zeta", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = verify().args(["sweep", "eta_closed_vs_zeta", "--windows", "64"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("eta.json");
    std::fs::write(&cfg, r#"{"params": {"thetas": [1.0, 2.0]}, "tolerance": 1e-9}"#).unwrap();
    let report = dir.path().join("report.md");
    let out = verify()
        .args(["run", "eta_closed_vs_zeta", "--report", "md", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&report).unwrap();
    assert!(md.contains("eta_closed_vs_zeta"));
}

#[test]
fn sweep_adds_convergence_table() {
    let out = verify()
        .args(["sweep", "toeplitz_index_vs_winding", "--windows", "64,128"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reports = parse_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(reports[0].convergence.len(), 2);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |threads: &str| {
        let out = verify()
            .env("VERIFY_THREADS", threads)
            .args(["sweep", "cocycle_ab_comparison", "--windows", "96,128"])
            .output()
            .unwrap();
        assert!(out.status.success());
        reports_part(&out.stdout)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn json_round_trip() {
    let scenarios: Vec<Scenario> =
        ["eta_closed_vs_zeta", "rho_flat_line_bundle", "chain_map_pi"].iter().map(|n| Scenario::new(n).unwrap()).collect();
    let reports = run_all(&scenarios).unwrap();
    let text = emit(&reports, Format::Json);
    let back = parse_json(&text).unwrap();
    assert_eq!(emit(&back, Format::Json), text);
}

#[test]
fn repeated_runs_are_identical() {
    let s = Scenario::new("sigma2_vs_deligne").unwrap();
    let a = serde_json::to_string(&run_scenario(&s).unwrap()).unwrap();
    let b = serde_json::to_string(&run_scenario(&s).unwrap()).unwrap();
    assert_eq!(a, b);
}
