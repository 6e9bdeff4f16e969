use std::process::{Command, Output};
use std::sync::OnceLock;

use d2lab::formula::axiom_by_id;
use d2lab::matrix::{fixture, read_matrix, validate, PaperMatrixId};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_d2lab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("D2LAB_BUDGET_SECS")
        .output()
        .expect("binary runs")
}

fn text(args: &[&str]) -> (String, i32) {
    let out = run(args);
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
        jsonschema::validator_for(&schema).expect("schema compiles")
    })
}

/// Runs with `--format json`, checks the report against the schema and the
/// process exit code against the report.
fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    let errors: Vec<String> = validator().iter_errors(&report).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    assert_eq!(report["exit_code"].as_i64().unwrap() as i32, out.status.code().unwrap(), "{args:?}");
    report
}

fn code(report: &Value) -> i64 {
    report["exit_code"].as_i64().unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(text(&["s5", "<>(<>p -> p)"]).0.lines().next(), Some("VALID (3 models checked)"));
    assert_eq!(text(&["s5", "<>(<>p -> p)"]).1, 0);
    assert_eq!(text(&["translate", "p ^ q"]), ("p & <>q\n".to_string(), 0));
    let r = json(&["paper-verify"]);
    assert_eq!(r["result"]["records"].as_array().unwrap().len(), 13);
    let refuted = r["result"]["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|rec| rec["refutation_confirmed"] == true);
    assert!(refuted);
    // findings are reported, so the run does not exit 0
    assert!(!r["findings"].as_array().unwrap().is_empty());
    assert_eq!(code(&r), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(text(&["s5", "p -> []p"]).1, 1);
    assert_eq!(text(&["d2", "DDK10"]).1, 0);
    assert_eq!(text(&["d2", "DDK22"]).1, 1);
    assert_eq!(text(&["s5", "p &&"]).1, 2);
    assert_eq!(text(&["frobnicate"]).1, 2);
    assert_eq!(text(&["check", "/nonexistent/m.matrix", "--system", "C"]).1, 2);
    assert_eq!(text(&["check", "P1"]).1, 2);
    assert_eq!(text(&["s5", "p | q | r | s | t"]).1, 3);
    assert_eq!(text(&["s5", "p | ~p | q | r | s", "--max-atoms", "5"]).1, 0);
    assert_eq!(text(&["s5", "p", "--max-atoms", "6"]).1, 2);
    assert_eq!(text(&["check", "P2", "--system", "C", "--refute", "DDK12"]).1, 0);
    assert_eq!(text(&["check", "P1", "--system", "C", "--refute", "DDK10"]).1, 1);
}

#[test]
fn budget_exhaustion_is_a_resource_limit() {
    let args = ["--format", "json", "search", "--size", "5", "--system", "C", "--refute", "DDK10"];
    let out = Command::new(BIN).args(args).env("D2LAB_BUDGET_SECS", "0.2").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(validator().is_valid(&r));
    assert_eq!(r["result"]["stats"]["termination"], "budget_exhausted");
    let flag = json(&["search", "--size", "5", "--system", "C", "--refute", "DDK10", "--budget-secs", "0.2"]);
    assert_eq!(code(&flag), 3);
}

#[test]
fn json_reports_match_schema_for_every_fixture() {
    for id in PaperMatrixId::ALL {
        let fx = fixture(id);
        let name = id.to_string();
        let system = fx.validates.to_string();
        let ones: Vec<String> = axiom_by_id(fx.refutes)
            .unwrap()
            .scheme
            .leaves()
            .iter()
            .map(|l| format!("{}=1", l.name()))
            .collect();
        let mut eval_args = vec!["eval", &name, fx.refutes];
        eval_args.extend(ones.iter().map(String::as_str));
        assert_eq!(code(&json(&eval_args)), 0);

        let r = json(&["check", &name, "--system", &system, "--refute", fx.refutes]);
        let claim = &d2lab::matrix::verify_paper_claims()[id as usize];
        assert_eq!(code(&r) == 0, claim.confirmed(), "{name}");
        assert_eq!(r["findings"].as_array().unwrap().len(), claim.findings.len(), "{name}");

        let r = json(&["paper-verify", &name]);
        assert_eq!(r["result"]["records"].as_array().unwrap().len(), 1);

        json(&["d2", fx.refutes]);
        json(&["translate", fx.refutes, "--dconj", "left"]);

        let designated: Vec<String> = fx.matrix.designated().iter().map(u8::to_string).collect();
        let neg: Vec<String> = fx.matrix.neg_table().iter().map(u8::to_string).collect();
        let r = json(&[
            "search",
            "--size",
            &fx.matrix.size().to_string(),
            "--designated",
            &designated.join(","),
            "--neg",
            &neg.join(","),
            "--refute",
            fx.refutes,
            "--limit",
            "2",
        ]);
        assert_eq!(code(&r), 0);
    }
    for args in [
        vec!["s5", "<>p -> []<>p"],
        vec!["classify"],
        vec!["classify", "--system", "C", "--dconj", "left"],
        vec!["classify", "--no-outer-diamond"],
        vec!["d2", "~p | q", "--no-outer-diamond"],
        vec!["s5", "(("],
        vec!["eval", "P1", "A => B", "A=1"],
        vec!["nope"],
    ] {
        json(&args);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let good = json(&["s5", "p -> []p"]);
    assert!(validator().is_valid(&good));
    let mut bad = good.clone();
    bad["result"]["verdict"]["verdict"] = "maybe".into();
    assert!(!validator().is_valid(&bad));
    let mut bad = good.clone();
    bad["exit_code"] = 7.into();
    assert!(!validator().is_valid(&bad));
    let mut bad = good;
    bad.as_object_mut().unwrap().remove("findings");
    assert!(!validator().is_valid(&bad));
}

#[test]
fn classify_shows_both_readings_when_they_differ() {
    let (out, _) = text(&["classify"]);
    let ddk19 = out.lines().skip_while(|l| !l.starts_with("DDK19")).nth(1).unwrap();
    assert!(ddk19.contains("^ right: INVALID") && ddk19.contains("^ left: VALID"), "{ddk19}");
    let r = json(&["classify"]);
    let rows = r["result"]["rows"].as_array().unwrap();
    let row = rows.iter().find(|row| row["axiom"] == "DDK22").unwrap();
    assert_eq!(row["verdict"]["verdict"], "invalid");
    assert_eq!(row["alternate"]["verdict"], "valid");
    let subjects: Vec<&str> = r["findings"].as_array().unwrap().iter().map(|f| f["subject"].as_str().unwrap()).collect();
    assert_eq!(subjects, ["DDK12", "DDK13", "DDK14", "DDK16"]);
}

#[test]
fn search_writes_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r = json(&["search", "--size", "2", "--validate", "C1,C2", "--refute", "DDK10", "--prune", "--out", out]);
    let files = r["result"]["files"].as_array().unwrap();
    assert_eq!(files.len() as u64, r["result"]["stats"]["found"].as_u64().unwrap());
    let validate_ax = [axiom_by_id("C1").unwrap(), axiom_by_id("C2").unwrap()];
    let refute_ax = [axiom_by_id("DDK10").unwrap()];
    for f in files {
        let m = read_matrix(&std::fs::read_to_string(f.as_str().unwrap()).unwrap()).unwrap();
        assert!(validate(&m, &validate_ax, &refute_ax).unwrap().separates());
        let (_, c) = text(&["check", f.as_str().unwrap(), "--axiom", "C1,C2", "--refute", "DDK10"]);
        assert_eq!(c, 0);
    }
}

#[test]
fn formulas_and_axiom_ids_are_interchangeable() {
    let by_id = json(&["d2", "DDK19"]);
    let inline = json(&["d2", "~(A ^ B | C) => (A => ~(B | C))"]);
    assert_eq!(by_id["result"]["verdict"], inline["result"]["verdict"]);
    assert_eq!(by_id["result"]["instance"], inline["result"]["instance"]);
    // only named axioms carry a published expectation
    assert_eq!(by_id["findings"].as_array().unwrap().len(), 0);
    let (t, _) = text(&["translate", "DDK10"]);
    assert_eq!(t, "<>p -> ~~p\n");
    let (e, _) = text(&["eval", "P1", "~(A | B)", "A=1", "B=3"]);
    assert!(e.starts_with("~(A | B) = "), "{e}");
}
