use std::process::{Command, Output};

use ces_core::product::ProductIndex;
use ces_toolkit::{ReportBody, RunReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ces-toolkit"))
        .args(args)
        .env_remove("CES_TOOLKIT_SEED")
        .output()
        .expect("binary runs")
}

/// Runs with `--json`, checks the report round-trips, and returns it with the exit code.
fn run_json(args: &[&str]) -> (RunReport, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let report: RunReport = serde_json::from_str(&text).expect("stdout is a RunReport");
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), raw);
    (report, out.status.code().unwrap())
}

fn dimension(r: &RunReport) -> usize {
    r.space.as_ref().unwrap().dimension
}

#[test]
fn construct_dimensions() {
    for (args, dim) in [
        (vec!["construct", "SP", "--dims", "3,3"], 4),
        (vec!["construct", "U"], 5),
        (vec!["construct", "SP+z(inf)", "--dims", "2,2"], 2),
        (vec!["construct", "SV+4", "--basis"], 5),
    ] {
        let (r, code) = run_json(&args);
        assert_eq!(code, 0);
        assert_eq!(dimension(&r), dim, "{args:?}");
    }
    let out = run(&["construct", "SP", "--dims", "3,3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dimension 4"));
}

fn enumeration(r: &RunReport) -> (&ces_core::product::EnumerationResult, Option<bool>) {
    match &r.body {
        ReportBody::Enumerate { result, pass, .. } => (result, *pass),
        other => panic!("unexpected body {other:?}"),
    }
}

#[test]
fn enumerate_examples() {
    for (args, tau) in [
        (vec!["enumerate", "U"], ProductIndex::Finite(6)),
        (vec!["enumerate", "SV+1"], ProductIndex::Finite(6)),
        (vec!["enumerate", "SP+z(1)", "--dims", "2,4"], ProductIndex::Finite(3)),
        (vec!["enumerate", "SP+z(1)", "--dims", "3,3", "--force-oracle"], ProductIndex::Finite(3)),
    ] {
        let (r, code) = run_json(&args);
        let (res, pass) = enumeration(&r);
        assert_eq!(res.product_index, tau, "{args:?}");
        assert_eq!(pass, Some(true));
        assert_eq!(code, 0);
    }
    let (r, code) = run_json(&["enumerate", "SP+z(1)+z(-1)", "--dims", "3,3"]);
    let (res, _) = enumeration(&r);
    assert_eq!(res.product_index, ProductIndex::Infinite);
    assert!(res.diagnostics.certified_family.is_some());
    assert_eq!(res.family_samples.len(), 50);
    assert_eq!(code, 0);
    let text = String::from_utf8(run(&["enumerate", "U"]).stdout).unwrap();
    assert!(text.contains("tau: 6") && text.contains("PASS"));
}

#[test]
fn failed_expectation_exits_with_one() {
    let (r, code) = run_json(&["enumerate", "U", "--restarts", "1"]);
    let (_, pass) = enumeration(&r);
    assert_eq!(pass, Some(false));
    assert_eq!(code, 1);
}

#[test]
fn ppt_reports() {
    for (args, cuts) in [
        (vec!["ppt", "tiles"], 1),
        (vec!["ppt", "shifts3q"], 3),
        (vec!["ppt", "tiles", "--cut", "1"], 1),
        (vec!["ppt", "shifts3q", "--cut", "2"], 1),
    ] {
        let (r, code) = run_json(&args);
        let ReportBody::Ppt { ppt, entangled, .. } = &r.body else {
            panic!("unexpected body");
        };
        assert_eq!(ppt.cuts.len(), cuts);
        assert!(ppt.ppt_all && *entangled);
        assert_eq!(code, 0);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["construct", "XYZ"],
        vec!["construct", "SP"],
        vec!["enumerate", "SU+7"],
        vec!["ppt", "nonsense"],
        vec!["ppt", "tiles", "--cut", "3"],
        vec!["enumerate", "U", "--tol-zero", "-1"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let err = String::from_utf8(run(&["construct", "XYZ"]).stderr).unwrap();
    assert!(err.contains("grammar"));
}

#[test]
fn seed_comes_from_environment_unless_given() {
    let exe = env!("CARGO_BIN_EXE_ces-toolkit");
    let out = Command::new(exe)
        .args(["enumerate", "V", "--json"])
        .env("CES_TOOLKIT_SEED", "9")
        .output()
        .unwrap();
    let r: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.seed, 9);
    let out = Command::new(exe)
        .args(["enumerate", "V", "--json", "--seed", "4"])
        .env("CES_TOOLKIT_SEED", "9")
        .output()
        .unwrap();
    let r: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.seed, 4);
}

fn verdicts(args: &[&str]) -> Vec<(usize, bool)> {
    let (r, code) = run_json(args);
    let ReportBody::VerifyAll { rows, all_passed } = &r.body else {
        panic!("unexpected body");
    };
    assert_eq!(code, if *all_passed { 0 } else { 1 });
    rows.iter().map(|row| (row.id, row.passed)).collect()
}

#[test]
fn verify_all_is_stable_across_seed_and_tolerance() {
    let base = verdicts(&["verify-all"]);
    assert_eq!(base.len(), 15);
    assert!(base.iter().all(|(_, p)| *p), "{base:?}");
    assert_eq!(verdicts(&["verify-all", "--seed", "7"]), base);
    assert_eq!(verdicts(&["verify-all", "--tol-zero", "1e-3"]), base);
}
