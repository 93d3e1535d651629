//! End-to-end behaviour of the `rinehart` command line: golden outputs, JSON
//! layout, determinism and exit codes.

use std::io::Write;
use std::path::PathBuf;

use rinehart_cli::app::{execute, Outcome};
use serde_json::Value;

fn asset(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Outcome {
    execute(std::iter::once("rinehart").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn session(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".rh").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn weyl_normal_form() {
    let out = run(&["pbw", "nf", "--session", &asset("sessions/weyl.rh"), "--el", "D*x"]);
    assert_eq!((out.code, out.stdout.as_str(), out.stderr.as_str()), (0, "x*D + 1\n", ""));
}

#[test]
fn weyl_products_and_coproducts() {
    let weyl = asset("sessions/weyl.rh");
    assert_eq!(run(&["pbw", "mult", "--session", &weyl, "--el", "D", "--el", "x^2"]).stdout, "x^2*D + 2*x\n");
    assert_eq!(run(&["hopf", "coproduct", "--session", &weyl, "--el", "D^2"]).stdout, "D^2 ⊗ 1 + D ⊗ 2*D + 1 ⊗ D^2\n");
    assert_eq!(run(&["hopf", "primitive", "--session", &weyl, "--el", "x*D"]).stdout, "yes\n");
    assert_eq!(run(&["hopf", "level", "--session", &weyl, "--el", "D^3"]).stdout, "3\n");
    assert_eq!(run(&["hopf", "solve-primitives", "--session", &weyl, "--deg", "2", "--n", "2"]).stdout, "dimension 3: D, x*D, x^2*D\n");
}

#[test]
fn normal_crossing_log_solver() {
    let v = json(&["logder", "solve", "--ring", "Q[x,y]/(x*y)", "--deg", "1"]);
    assert_eq!(v["status"], "pass");
    let data = &v["items"][0]["data"];
    assert_eq!(data["dimension"], 2);
    assert_eq!(data["basis"].as_array().unwrap().len(), 2);
    assert_eq!(data["basis"][0]["coefficients"][0]["terms"][0]["coeff"], "1/1");
}

#[test]
fn json_key_order_is_stable() {
    let out = run(&["--json", "logder", "solve", "--ring", "Q[x,y]/(x*y)", "--deg", "1"]);
    let keys = ["\"tool\"", "\"version\"", "\"command\"", "\"status\"", "\"items\""];
    let at: Vec<usize> = keys.iter().map(|k| out.stdout.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{}", out.stdout);
    assert!(!out.stdout.contains("timing_ms"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["--json", "paper-suite"],
        vec!["--json", "run", "--session", "sessions/cone.rh"],
        vec!["--json", "sheaf", "lemma2", "--samples", "10"],
    ] {
        let args: Vec<String> = args.iter().map(|a| if a.starts_with("sessions/") { asset(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["--timing", "pbw", "nf", "--session", &asset("sessions/weyl.rh"), "--el", "D"]);
    assert!(v["timing_ms"].is_u64());
    let text = run(&["--timing", "pbw", "nf", "--session", &asset("sessions/weyl.rh"), "--el", "D"]).stdout;
    assert!(text.lines().last().unwrap().starts_with("time: "));
}

#[test]
fn sessions_run_cleanly() {
    for name in ["weyl", "normal_crossing", "normal_crossing_quotient", "cone"] {
        let out = run(&["run", "--session", &asset(&format!("sessions/{name}.rh"))]);
        assert_eq!(out.code, 0, "{name}: {}{}", out.stdout, out.stderr);
    }
    let quotient = json(&["run", "--session", &asset("sessions/normal_crossing_quotient.rh")]);
    assert_eq!(quotient["status"], "undecided");
}

#[test]
fn fiber_ranks_from_sessions() {
    let v = json(&["run", "--session", &asset("sessions/cone.rh")]);
    let ranks: Vec<i64> = v["items"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["command"].as_str().unwrap().starts_with("fiber"))
        .map(|i| i["data"]["rank"].as_i64().unwrap())
        .collect();
    assert_eq!(ranks, [3, 2]);
}

#[test]
fn syntax_errors_exit_2_with_position() {
    let f = session("ring R = Q[x];\nder D = dx\nnf D;\n");
    let path = f.path().to_str().unwrap();
    let out = run(&["run", "--session", path]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3, column 1"), "{}", out.stderr);
    let v = json(&["run", "--session", path]);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!((v["error"]["line"].as_u64(), v["error"]["column"].as_u64()), (Some(3), Some(1)));
    assert_eq!(v["error"]["expected"][0], "`;`");

    let v = json(&["pbw", "nf", "--session", &asset("sessions/weyl.rh"), "--el", "D*"]);
    assert_eq!((v["error"]["kind"].as_str(), v["error"]["column"].as_u64()), (Some("syntax"), Some(3)));
}

#[test]
fn user_errors_exit_2() {
    assert_eq!(run(&["bogus"]).code, 2);
    assert_eq!(run(&["pbw", "nf", "--session", "/nonexistent.rh", "--el", "D"]).code, 2);
    assert_eq!(run(&["pbw", "nf", "--session", &asset("sessions/weyl.rh"), "--el", "q"]).code, 2);
    let dup = session("ring R = Q[x];\nder D = dx;\nder D = x*dx;\n");
    let out = run(&["run", "--session", dup.path().to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    assert_eq!(run(&["logder", "solve", "--ring", "Q[x]/(1)", "--deg", "1"]).code, 2);
}

#[test]
fn failed_checks_exit_1() {
    let f = session("ring R = Q[x,y];\nder a = x*dx;\nder b = y*dy;\nsyz x*a;\nverify;\n");
    let out = run(&["lr", "verify", "--session", f.path().to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("syzygy 1: fail"), "{}", out.stdout);
    assert!(out.stdout.ends_with("overall: fail\n"));
}

#[test]
fn help_and_version_exit_0() {
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("paper-suite"));
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn paper_suite_reports_every_criterion_in_order() {
    let out = run(&["paper-suite"]);
    assert_eq!(out.code, 0);
    let numbers: Vec<usize> = out
        .stdout
        .lines()
        .filter_map(|l| l.strip_prefix("criterion "))
        .map(|l| l.split(':').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(numbers, (1..=12).collect::<Vec<_>>());
    assert!(out.stdout.ends_with("overall: undecided\n"));
}

#[test]
fn sheaf_fixtures() {
    let out = run(&["sheaf", "check", "--fixture", &asset("fixtures/gluing.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("sheafification: {}: 0, {a}: 1, {b}: 1, {a,b}: 2"), "{}", out.stdout);
    let v = json(&["sheaf", "lemma2", "--fixture", &asset("fixtures/vee.json")]);
    assert_eq!(v["status"], "hypothesis violated");
    assert_eq!(run(&["sheaf", "lemma2", "--fixture", &asset("fixtures/vee.json")]).code, 0);
    let v = json(&["sheaf", "lemma1", "--fixture", &asset("fixtures/vee.json")]);
    assert_eq!(v["status"], "pass");
    let bad = session("{\"points\": [\"a\"], \"presheaf\": {}, \"bogus\": 1}");
    assert_eq!(run(&["sheaf", "check", "--fixture", bad.path().to_str().unwrap()]).code, 2);
}

#[test]
fn order_flag_overrides_session() {
    let f = session("ring R = Q[x,y]/(x - y^2);\nder a = 2*y*dx + dy;\nnf y^2*a;\n");
    let path = f.path().to_str().unwrap();
    assert_eq!(run(&["--order", "lex", "run", "--session", path]).stdout, "y^2*a\n");
    assert_eq!(run(&["--order", "grevlex", "run", "--session", path]).stdout, "x*a\n");
}

#[test]
fn internal_errors_exit_3() {
    use rinehart_cli::error::CliError;
    assert_eq!(CliError::from(rinehart_core::Error::StepLimit(5)).exit_code(), 3);
    assert_eq!(CliError::Internal("broken invariant".into()).exit_code(), 3);
    assert_eq!(CliError::user("bad input").exit_code(), 2);
}
