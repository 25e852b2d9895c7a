use std::process::Command;

use serde_json::Value;

fn lieode(args: &[&str]) -> (i32, String, String) {
    let out =
        Command::new(env!("CARGO_BIN_EXE_lieode")).args(args).env("LIEODE_THREADS", "2").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/../../docs/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn table_json_validates_and_is_deterministic() {
    let (code, out, _) = lieode(&["table", "--n", "3", "--m", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_valid(&schema("table.schema.json"), &doc);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 13);
    let (_, again, _) = lieode(&["table", "--n", "3", "--m", "2", "--format", "json"]);
    assert_eq!(out, again);
}

#[test]
fn second_order_table_validates() {
    let (code, out, _) = lieode(&["table", "--n", "2", "--m", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_valid(&schema("table.schema.json"), &doc);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 15);
}

#[test]
fn classify_json_validates_for_both_outcomes() {
    let v = schema("classify.schema.json");
    for n in ["4", "3", "2"] {
        let (code, out, _) = lieode(&["classify", "--n", n, "--m", "2", "--format", "json"]);
        assert_eq!(code, 0, "n = {n}");
        assert_valid(&v, &serde_json::from_str(&out).unwrap());
    }
    let (_, out, _) = lieode(&["classify", "--n", "4", "--m", "2", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((doc["dim_div"].as_u64(), doc["dim_var"].as_u64()), (Some(12), Some(4)));
}

#[test]
fn exit_codes() {
    assert_eq!(lieode(&["levi", "--n", "4", "--m", "3"]).0, 0);
    // invalid configurations
    assert_eq!(lieode(&["table", "--n", "1"]).0, 2);
    assert_eq!(lieode(&["normal-form", "--n", "3", "--q", "x^^2"]).0, 2);
    assert_eq!(lieode(&["all", "--max-m", "9"]).0, 2);
    assert_eq!(lieode(&["bogus"]).0, 2);
    // an impossible residual threshold turns into a failed verification
    let (code, _, err) =
        lieode(&["numcheck", "--n", "3", "--m", "1", "--q", "1", "--t", "0.5", "--tol", "1e-30", "--grid", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("verification failed"), "{err}");
}

#[test]
fn output_file_and_text_reports() {
    let dir = std::env::temp_dir().join(format!("lieode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nf.json");
    let (code, out, _) = lieode(&["normal-form", "--n", "4", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["coefficients"]["A2"], "10*q");
    assert_eq!(doc["coefficients"]["A4"], "9*q^2 + 3*q''");
    std::fs::remove_dir_all(&dir).unwrap();

    let (code, out, _) = lieode(&["normal-form", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("A[2] = 4*q") && out.contains("A[3] = 2*q'"), "{out}");
    let (code, out, _) = lieode(&["second-order", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("dim 15"), "{out}");
}

#[test]
fn numcheck_text_and_json() {
    let (code, out, _) =
        lieode(&["numcheck", "--n", "3", "--m", "1", "--q", "1", "--t", "-0.1,0.1", "--grid", "5", "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert!(doc["max_symmetry_residual"].as_f64().unwrap() < 1e-6);
    assert!(doc["min_control_residual"].as_f64().unwrap() > 1e-2);
}

#[test]
fn schemas_reject_malformed_reports() {
    let (_, out, _) = lieode(&["table", "--n", "3", "--m", "1", "--format", "json"]);
    let mut doc: Value = serde_json::from_str(&out).unwrap();
    doc["brackets"][0]["terms"]["S_0,1"] = Value::String("-1.0".into());
    assert!(!schema("table.schema.json").is_valid(&doc));
    let (_, out, _) = lieode(&["classify", "--n", "4", "--m", "1", "--format", "json"]);
    let mut doc: Value = serde_json::from_str(&out).unwrap();
    doc["generators"][0]["class"] = Value::String("maybe".into());
    assert!(!schema("classify.schema.json").is_valid(&doc));
}
