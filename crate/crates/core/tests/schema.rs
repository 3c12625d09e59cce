use std::sync::Arc;

use serde_json::{json, Value};

use critlab::criticality::{classify, ClassifyOptions};
use critlab::field::ExpSolution;
use critlab::limit_periodic::DriftField;
use critlab::operator::{PresetRegistry, CE1_SA};
use critlab::verification::{run_full_suite, verify_kn_upper};

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/critlab.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn validator(def: &str) -> jsonschema::Validator {
    let root = schema();
    let wrapped = json!({ "$ref": format!("#/$defs/{def}"), "$defs": root["$defs"] });
    jsonschema::validator_for(&wrapped).unwrap()
}

fn assert_valid(def: &str, value: &Value) {
    let v = validator(def);
    let errors: Vec<String> = v.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{def}: {errors:#?}");
}

#[test]
fn schema_document_compiles() {
    jsonschema::validator_for(&schema()).unwrap();
}

#[test]
fn suite_report_matches_schema() {
    let suite = serde_json::to_value(run_full_suite().unwrap()).unwrap();
    assert_valid("suite", &suite);
    assert_valid("pipeline", &suite["ce2"]);
    assert!(jsonschema::is_valid(&schema(), &suite));
}

#[test]
fn records_and_reports_match_schema() {
    assert_valid("record", &serde_json::to_value(verify_kn_upper(4).unwrap()).unwrap());
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    let op = reg.build(CE1_SA).unwrap();
    let rep = classify(&op, &ExpSolution::new(Arc::new(DriftField), -1.0), &ClassifyOptions::default()).unwrap();
    assert_valid("criticality", &serde_json::to_value(rep).unwrap());
}

#[test]
fn schema_rejects_malformed_records() {
    let mut rec = serde_json::to_value(verify_kn_upper(2).unwrap()).unwrap();
    rec["pass"] = json!("yes");
    assert!(!validator("record").is_valid(&rec));
    let mut rec = serde_json::to_value(verify_kn_upper(2).unwrap()).unwrap();
    rec.as_object_mut().unwrap().remove("worst_case");
    assert!(!validator("record").is_valid(&rec));
}
