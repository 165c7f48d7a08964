mod common;

use std::process::Command;

use heapkit::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("heapkit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn fixture(name: &str) -> String {
    common::fixture_path(name).display().to_string()
}

#[test]
fn classify_exit_codes() {
    let (code, out, _) = call(&["classify", &fixture("two_components.json")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["is_d_complete"], true);
    assert_eq!(v["component_count"], 2);

    let (code, out, err) = call(&["classify", &fixture("equal_color_antichain.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("negative"));
    let v = json(&out);
    assert_eq!(v["is_d_complete"], false);
    let ec = v["reports"].as_array().unwrap().iter().find(|r| r["property"] == "EC").unwrap();
    assert_eq!(ec["holds"], false);
    assert_eq!(ec["witnesses"][0]["elements"], serde_json::json!([0, 1]));

    let (code, _, err) = call(&["classify", "/nonexistent/poset.json"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn malformed_documents_name_the_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"diagram": {"colors": ["a"], "theta": [[2]]}, "elements": [{"id": 0, "color": "z"}], "covers": []}"#,
    )
    .unwrap();
    let (code, _, err) = call(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/elements/0/color"), "{err}");

    std::fs::write(&path, r#"{"diagram": {"colors": ["a"], "theta": [[2]]}, "elements": [{"id": "x"}]}"#).unwrap();
    let (code, _, err) = call(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/elements/0/id"), "{err}");
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["classify", "FIX"],
        vec!["decompose", "FIX"],
        vec!["rep", "verify", "FIX"],
        vec!["weyl", "lambda", "FIX"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| if *a == "FIX" { fixture("singleton.json") } else { a.to_string() })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = call(&refs);
        let second = call(&refs);
        assert_eq!(first, second);
    }
}

#[test]
fn decompose_and_validate_fixture() {
    let (code, out, _) = call(&["decompose", &fixture("two_components.json")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["component_count"], 2);
    let left = &v["components"][0]["slant"];
    assert_eq!(left["parts"].as_array().unwrap().len(), 2);
    assert_eq!(left["irreducible"], serde_json::json!([true, true]));

    let (code, out, _) = call(&["validate", &fixture("two_components.json")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["elements"], 22);
    assert_eq!(v["symmetrizable"], true);
}

#[test]
fn enumerate_from_a_diagram_file() {
    let (code, out, _) = call(&["enumerate", &fixture("one_node.json"), "--max-size", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["count"], 1);
    let (code, _, err) = call(&["--cap", "0", "enumerate", &fixture("one_node.json"), "--max-size", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn heap_verbs() {
    let (code, out, _) = call(&["heap", "window", "builtin:cycle:4", "--lo", "0", "--hi", "7"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["elements"].as_array().unwrap().len(), 8);
    assert_eq!(v["validation"]["g4"], true);

    let zig = fixture("zigzag_a3.json");
    let (code, out, _) = call(&["heap", "filter-check", &zig]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["d_complete"].clone(), v["lcb1"].clone()), (Value::Bool(true), Value::Bool(false)));

    let dir = tempfile::tempdir().unwrap();
    let filter = dir.path().join("f.json");
    std::fs::write(&filter, r#"{"generators": [[0, 0]], "isolated": ["a"]}"#).unwrap();
    let (code, out, _) = call(&["heap", "filter-check", &zig, "--filter", filter.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["d_complete"], false);

    let (code, out, _) = call(&["heap", "saturate", &zig, "--max-steps", "16"]);
    assert_eq!(code, 0);
    assert!(json(&out)["saturation"]["period_steps"].as_u64().unwrap() >= 1);
    let (code, _, _) = call(&["heap", "saturate", &zig, "--max-steps", "1"]);
    assert_eq!(code, 1);

    let (code, _, err) = call(&["heap", "filter-check", "builtin:cycle:3"]);
    assert_eq!(code, 2);
    assert!(err.contains("no filter"));
    let (code, _, _) = call(&["heap", "window", "builtin:cycle:2", "--lo", "0", "--hi", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn weyl_and_rep_verbs() {
    let two = fixture("two_components.json");
    let (code, out, _) = call(&["weyl", "lambda", &two]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["coords"].as_array().unwrap().len(), 16);
    let (code, out, _) = call(&["rep", "verify", &two]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["carries"], true);
    let (code, _, _) = call(&["--cap", "10", "rep", "verify", &two]);
    assert_eq!(code, 2);
    let (code, out, _) = call(&["rep", "verify", &fixture("equal_color_antichain.json")]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["carries"], false);

    let (code, out, _) = call(&["weyl", "words", &fixture("singleton.json")]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["words"][0]["lambda_minuscule"], true);
    let (code, out, _) = call(&["weyl", "words", &fixture("equal_color_antichain.json")]);
    assert_eq!(code, 1);
    assert!(json(&out)["failed"].as_array().is_some());
}

#[test]
fn render_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("p.dot");
    let (code, _, _) = call(&["render", &fixture("two_components.json"), "-o", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(&out_path).unwrap();
    assert!(dot.starts_with("digraph poset {"));
    assert!(dot.trim_end().ends_with('}'));
    let p = common::fixture("two_components.json");
    assert_eq!(dot.matches(" -> ").count(), p.covers().len());
}

#[test]
fn usage_errors() {
    let (code, _, err) = call(&["classify"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_heapkit");
    let ok = Command::new(bin).args(["classify", &fixture("singleton.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let neg = Command::new(bin).args(["classify", &fixture("equal_color_antichain.json")]).output().unwrap();
    assert_eq!(neg.status.code(), Some(1));
    let bad = Command::new(bin)
        .args(["classify", &fixture("singleton.json")])
        .env("HEAPKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let one = Command::new(bin)
        .args(["enumerate", &fixture("one_node.json"), "--max-size", "2"])
        .env("HEAPKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
}
