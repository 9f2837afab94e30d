use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rfdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfdual")).args(args).output().expect("spawn rfdual")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = rfdual(args);
    assert!(o.status.code().is_some_and(|c| c < 2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn schema() -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn type_ok(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "string" => v.is_string(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        "array" => v.is_array(),
        "boolean" => v.is_boolean(),
        _ => false,
    }
}

/// Checks the keywords the report schema uses: type, enum, minimum,
/// required, properties and additionalProperties.
fn conforms(schema: &Value, v: &Value, at: &str) -> Result<(), String> {
    match schema.get("type") {
        Some(Value::String(t)) if !type_ok(t, v) => return Err(format!("{at}: expected {t}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)) => {
            return Err(format!("{at}: expected one of {ts:?}"))
        }
        _ => {}
    }
    if let Some(Value::Array(allowed)) = schema.get("enum") {
        if !allowed.contains(v) {
            return Err(format!("{at}: {v} not in {allowed:?}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{at}: {x} < {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(req)) = schema.get("required") {
            for k in req {
                if !obj.contains_key(k.as_str().unwrap()) {
                    return Err(format!("{at}: missing {k}"));
                }
            }
        }
        for (k, sub) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(s) => conforms(s, sub, &format!("{at}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    Ok(())
}

#[test]
fn csum_single_values() {
    let o = rfdual(&["csum", "6", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-2");
    assert_eq!(stdout(&rfdual(&["csum", "1", "999"])).trim(), "1");
    let v = json(&["csum", "12", "8", "--format", "json"]);
    assert_eq!(v["c"], -2);
}

#[test]
fn csum_table_csv() {
    let o = rfdual(&["csum", "--table", "3", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["q", "n", "c"]);
    let recs: Vec<_> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), 9);
    let last = &recs[8];
    assert_eq!((&last[0], &last[1], &last[2]), ("3", "3", "2"));
}

#[test]
fn csum_table_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t.csv");
    let bin_path = dir.path().join("t.bin");
    assert!(rfdual(&["csum", "--table", "10", "20", "--out", csv_path.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(&csv_path).unwrap().lines().count(), 201);
    assert!(rfdual(&["csum", "--table", "10", "20", "--out", bin_path.to_str().unwrap(), "--binary"]).status.success());
    let t = rfdual_core::CsumTable::read_binary(std::fs::File::open(&bin_path).unwrap()).unwrap();
    assert_eq!(t.get(6, 3), -2);
    assert_eq!(rfdual(&["csum", "--table", "3", "3", "--binary"]).status.code(), Some(2));
}

#[test]
fn csum_usage_errors() {
    assert_eq!(rfdual(&["csum", "0", "3"]).status.code(), Some(2));
    assert_eq!(rfdual(&["csum", "6"]).status.code(), Some(2));
    assert_eq!(rfdual(&["csum", "x", "3"]).status.code(), Some(2));
}

#[test]
fn verify_square_indicator_at_two() {
    let o = rfdual(&["verify", "ex3-7", "--q", "2", "--terms", "10000", "--tol", "1e-3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert!((v["target"].as_f64().unwrap() + 0.5).abs() < 1e-15);
    assert!(v["runtime_ms"].is_null());
}

#[test]
fn verify_rejects_bad_points() {
    assert_eq!(rfdual(&["verify", "ra2", "--q", "1"]).status.code(), Some(2));
    assert_eq!(rfdual(&["verify", "no-such-case"]).status.code(), Some(2));
    assert_eq!(rfdual(&["verify", "ex3-4", "--s", "0.5"]).status.code(), Some(2));
    assert_eq!(rfdual(&["verify", "ex4-2", "--q", "1"]).status.code(), Some(2));
}

#[test]
fn verify_fail_exits_one() {
    let o = rfdual(&["verify", "ex3-6", "--q", "1", "--terms", "10", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn verify_conditional_is_smoke() {
    let v = json(&["verify", "ra2", "--q", "3", "--terms", "5000", "--grouping", "period-grouped", "--format", "json"]);
    assert_eq!(v["verdict"], "smoke");
    assert_eq!(v["convergence_class"], "conditional");
    assert_eq!(v["params"]["grouping"], "period-grouped");
}

#[test]
fn verify_dirichlet_series() {
    let o = rfdual(&["verify", "dseries-lambda-K-psi", "--s", "2", "--terms", "100000", "--tol", "1e-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_two_variable() {
    let v = json(&["verify", "ex4-2", "--q", "2", "--q2", "3", "--terms", "3000", "--format", "json"]);
    assert_eq!(v["params"]["q2"], 3);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn reports_match_schema() {
    let schema = schema();
    let runs: &[&[&str]] = &[
        &["verify", "ex3-7", "--q", "2", "--terms", "2000", "--format", "json"],
        &["verify", "ra2", "--q", "4", "--terms", "2000", "--format", "json", "--timings"],
        &["verify", "ex3-4", "--s", "3", "--q", "5", "--terms", "2000", "--format", "json"],
        &["verify", "eq-sigma", "--s", "2", "--q", "6", "--terms", "2000", "--format", "json"],
        &["verify", "ex4-1", "--s", "2", "--q", "2", "--q2", "2", "--terms", "100", "--format", "json"],
        &["verify", "dseries-lambda-K-psi", "--s", "3", "--terms", "2000", "--format", "json"],
    ];
    for args in runs {
        let v = json(args);
        conforms(&schema, &v, "report").unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
    let timed = json(runs[1]);
    assert!(timed["runtime_ms"].as_f64().is_some());
    let broken = serde_json::json!({"case": "x"});
    assert!(conforms(&schema, &broken, "report").is_err());
}

#[test]
fn verify_csv_has_flat_header() {
    let o = rfdual(&["verify", "ex3-7", "--q", "3", "--terms", "1000", "--format", "csv"]);
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let h = r.headers().unwrap().clone();
    assert_eq!(&h[0], "case");
    assert!(h.iter().any(|c| c == "abs_error"));
    assert_eq!(r.records().count(), 1);
}

#[test]
fn coefficient_paths() {
    let v = json(&["coeff", "ex3-4", "--s", "2", "--n", "1", "--path", "closed", "--format", "json"]);
    // 1/zeta(3)
    assert!((v["closed"].as_f64().unwrap() - 0.831_907_372_580_707_5).abs() < 1e-12);
    let v = json(&["coeff", "ex3-7", "--n", "3", "--path", "closed", "--format", "json"]);
    assert_eq!(v["closed"].as_f64().unwrap(), 0.0);
    let v = json(&["coeff", "ex4-2", "--n1", "1", "--n2", "1", "--path", "all", "--format", "json"]);
    assert!(v["max_gap"].as_f64().unwrap() < 1e-5);
    assert_eq!(rfdual(&["coeff", "ex3-7"]).status.code(), Some(2));
    assert_eq!(rfdual(&["coeff", "ex4-2", "--n1", "1"]).status.code(), Some(2));
}

#[test]
fn pairing_trivial_box() {
    let v = json(&["pair", "--terms", "1", "1", "--format", "json"]);
    assert_eq!(v["lhs"], v["rhs"]);
    assert_eq!(v["abs_gap"].as_f64().unwrap(), 0.0);
}

#[test]
fn config_file_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.conf");
    std::fs::write(&p, "# small run\nterms = 500\ntol = 0.5\nformat = json\n").unwrap();
    let v = json(&["verify", "ex3-7", "--q", "2", "--config", p.to_str().unwrap()]);
    assert_eq!(v["params"]["N"], 500);
    // flags win over the file
    let v = json(&["verify", "ex3-7", "--q", "2", "--terms", "700", "--config", p.to_str().unwrap()]);
    assert_eq!(v["params"]["N"], 700);

    std::fs::write(&p, "colour = red\n").unwrap();
    assert_eq!(rfdual(&["verify", "ex3-7", "--config", p.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("absent.conf");
    assert_eq!(rfdual(&["verify", "ex3-7", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn case_listing() {
    let v = json(&["cases", "--format", "json"]);
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    for id in ["ra1", "ra2", "ex3-7", "eq-varphi", "ex4-2", "dseries-lambda-K-psi"] {
        assert!(ids.contains(&id), "{id}");
    }
}
