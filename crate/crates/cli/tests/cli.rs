use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use symgap::{recompose, FiniteFunction, FunctionDocument};

fn symgap(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_symgap"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn symgap");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

/// `S(3,(0,1,2))` tabulated directly: 1 on points with three distinct coordinates.
fn all_distinct_indicator() -> Value {
    let table: Vec<u8> = (0..27)
        .map(|m| {
            let (a, b, c) = (m / 9, m / 3 % 3, m % 3);
            u8::from(a != b && b != c && a != c)
        })
        .collect();
    json!({ "k": 3, "n": 3, "table": table })
}

#[test]
fn analyze_reports_full_gap_function() {
    let out = symgap(&["--format", "json", "analyze"], Some(&all_distinct_indicator().to_string()));
    let r = json_of(&out);
    assert_eq!(r["ess"], 3);
    assert_eq!(r["gap"], 3);
    assert_eq!(r["sep"], 8);
    assert_eq!(r["symmetric"], true);
    assert_eq!(r["dominants"], json!([]));
    assert_eq!(r["range"], json!([0, 1]));
    assert_eq!(r["diagonal"], json!([0, 0, 0]));
}

#[test]
fn analyze_constant_has_null_gap() {
    let out = symgap(&["--format", "json", "analyze"], Some(r#"{"k":3,"n":1,"table":[0,0,0]}"#));
    let r = json_of(&out);
    assert_eq!(r["ess"], 0);
    assert_eq!(r["gap"], Value::Null);
    assert_eq!(r["ind"], Value::Null);
}

#[test]
fn malformed_documents_exit_2() {
    let wrong_len = symgap(&["analyze"], Some(r#"{"k":2,"n":2,"table":[0,1,1,0,1]}"#));
    assert_eq!(wrong_len.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&wrong_len.stderr).contains("4 entries"));
    let out_of_range = symgap(&["analyze"], Some(r#"{"k":2,"n":1,"table":[0,2]}"#));
    assert_eq!(out_of_range.status.code(), Some(2));
    let not_json = symgap(&["analyze"], Some("k=2"));
    assert_eq!(not_json.status.code(), Some(2));
}

#[test]
fn analyze_reads_files_and_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "f.json", &all_distinct_indicator());
    let report = dir.path().join("report.json");
    let out = symgap(&["--format", "json", "-o", report.to_str().unwrap(), "analyze", &input], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["class_label"], "G^3_{3,3}");
}

#[test]
fn text_report_names_variables_from_one() {
    let out = symgap(&["analyze"], Some(&all_distinct_indicator().to_string()));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ess: 3 {x1, x2, x3}"), "{text}");
    assert!(text.contains("Dom: {}"), "{text}");
}

#[test]
fn construct_gap_n_matches_indicator() {
    let spec = json!({ "k": 3, "n": 3, "a0": 0, "b": [{ "set": [0, 1, 2], "value": 1 }] });
    let out = symgap(&["--format", "json", "construct", "gap-n"], Some(&spec.to_string()));
    assert_eq!(json_of(&out), all_distinct_indicator());
}

#[test]
fn construct_ternary_with_equal_coefficients_exits_1() {
    let spec = json!({ "k": 3, "family": "minority", "a": [1, 1, 1] });
    let out = symgap(&["construct", "gap2-ternary"], Some(&spec.to_string()));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("distinct"));
}

#[test]
fn construct_linear_has_64_entries() {
    let spec = json!({ "k": 4, "coefficients": [2, 2, 2], "constant": 0 });
    let r = json_of(&symgap(&["--format", "json", "construct", "linear"], Some(&spec.to_string())));
    let table = r["table"].as_array().unwrap();
    assert_eq!(table.len(), 64);
    for (m, v) in table.iter().enumerate() {
        let digit_sum = m / 16 + m / 4 % 4 + m % 4;
        assert_eq!(v.as_u64().unwrap() as usize, 2 * digit_sum % 4);
    }
}

#[test]
fn construct_orbit_sum_and_symmetric() {
    let orbit = json!({ "k": 3, "n": 3, "alpha": [0, 1, 2] });
    let r = json_of(&symgap(&["--format", "json", "construct", "orbit-sum"], Some(&orbit.to_string())));
    assert_eq!(r, all_distinct_indicator());

    let values: Vec<Value> =
        [[0, 0], [0, 1], [1, 1]].iter().zip([1, 0, 1]).map(|(m, v)| json!({ "multiset": m, "value": v })).collect();
    let spec = json!({ "k": 2, "n": 2, "values": values });
    let r = json_of(&symgap(&["--format", "json", "construct", "symmetric"], Some(&spec.to_string())));
    assert_eq!(r["table"], json!([1, 0, 0, 1]));
}

fn recomposed_fixture() -> FiniteFunction {
    let g = FiniteFunction::constant(4, 2, 2).unwrap();
    let h = FiniteFunction::from_fn(4, 4, |p| {
        let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
        if distinct {
            3
        } else {
            0
        }
    })
    .unwrap();
    recompose(&g, &h).unwrap()
}

#[test]
fn decompose_round_trips_recomposed_function() {
    let f = recomposed_fixture();
    let doc = serde_json::to_value(FunctionDocument::from(&f)).unwrap();
    let r = json_of(&symgap(&["--format", "json", "decompose"], Some(&doc.to_string())));
    let g: FiniteFunction = serde_json::from_value(r["g"].clone()).unwrap();
    let h: FiniteFunction = serde_json::from_value(r["h"].clone()).unwrap();
    assert_eq!(g.arity(), 2);
    assert_eq!(recompose(&g, &h).unwrap(), f);

    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "pair.json", &r);
    let rebuilt = json_of(&symgap(&["--format", "json", "construct", "recompose", &spec], None));
    assert_eq!(rebuilt, doc);
}

#[test]
fn decompose_rejects_out_of_hypothesis_inputs() {
    let out = symgap(&["decompose"], Some(&all_distinct_indicator().to_string()));
    assert_eq!(out.status.code(), Some(1));
    let weighted: Vec<usize> = (0..256).map(|m| (m / 64 + 2 * (m / 16 % 4) + m / 4 % 4 + m % 4) % 4).collect();
    let asymmetric = json!({ "k": 4, "n": 4, "table": weighted });
    let out = symgap(&["decompose"], Some(&asymmetric.to_string()));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn census_counts_full_gap_bucket() {
    let r = json_of(&symgap(&["--format", "json", "census", "3", "3", "--workers", "2"], None));
    assert_eq!(r["total"], 59049);
    let bucket = r["counts"].as_array().unwrap().iter().find(|b| b["ess"] == 3 && b["gap"] == 3).cloned();
    assert_eq!(bucket.unwrap()["count"], 6);
}

#[test]
fn census_over_budget_exits_2_with_required_count() {
    let out = symgap(&["census", "3", "5"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("10460353203"));
    let capped = symgap(&["census", "2", "3", "--budget-override", "10"], None);
    assert_eq!(capped.status.code(), Some(2));
    let raised = symgap(&["census", "2", "4", "--budget-override"], None);
    assert!(raised.status.success());
}

#[test]
fn sampling_needs_seed_and_is_reproducible() {
    let no_seed = symgap(&["census", "3", "5", "--sample", "100"], None);
    assert_eq!(no_seed.status.code(), Some(2));
    let args = ["--format", "json", "census", "3", "5", "--sample", "2000", "--seed", "7"];
    let one = symgap(&args, None);
    let mut more_workers = args.to_vec();
    more_workers.extend(["--workers", "3"]);
    let two = symgap(&more_workers, None);
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(json_of(&one)["total"], 2000);
}

#[test]
fn verify_exit_codes() {
    let pass = symgap(&["--format", "json", "verify", "cor4_1", "3", "3"], None);
    assert_eq!(pass.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&pass.stdout).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["instances_checked"], 150);

    let unknown = symgap(&["verify", "unknown-suite", "3", "3"], None);
    assert_eq!(unknown.status.code(), Some(2));

    let missing = symgap(&["verify", "cor4_1"], None);
    assert_eq!(missing.status.code(), Some(2));

    let fail = symgap(&["--format", "json", "verify", "cor4_2", "3", "3"], None);
    assert_eq!(fail.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&fail.stdout).unwrap();
    assert_eq!(r["passed"], false);
    assert!(!r["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_list_names_every_suite() {
    let out = symgap(&["verify", "list"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in symgap::suite_names() {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let doc = all_distinct_indicator().to_string();
    let a = symgap(&["--format", "json", "analyze"], Some(&doc));
    let b = symgap(&["--format", "json", "analyze"], Some(&doc));
    assert_eq!(a.stdout, b.stdout);
    let a = symgap(&["verify", "thm2_4", "3", "3", "--workers", "1"], None);
    let b = symgap(&["verify", "thm2_4", "3", "3", "--workers", "4"], None);
    assert_eq!(a.stdout, b.stdout);
}
