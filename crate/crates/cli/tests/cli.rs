use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn shintani(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shintani"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

const BETA: &str = r#"{"r":1,"A":[1],"x":[0.5],"y":[0.5],"chi":[1],
    "s":[{"re":2,"im":0},{"re":3,"im":0.5}],"variant":"NORMALIZED","method":"auto"}"#;

#[test]
fn beta_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = problem(dir.path(), "beta.json", BETA);
    let out = shintani(&["eval", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = json(&out);
    let v = &rep["cases"][0]["value"];
    assert!((v["re"].as_f64().unwrap() - 3.6638623767).abs() < 1e-9, "{v}");
    assert!(v["im"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(rep["summary"]["errors"], 0);
    assert_eq!(rep["seed"], Value::Null);
    assert_eq!(rep["config"]["series_tol"], 1e-12);
}

#[test]
fn csv_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = problem(dir.path(), "beta.json", BETA);
    let j = json(&shintani(&["eval", &path]));
    let out = shintani(&["eval", &path, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rd.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    for (i, row) in rows.iter().enumerate() {
        let case = &j["cases"][i];
        for (field, key, part) in [
            ("value_re", "value", "re"),
            ("value_im", "value", "im"),
            ("s0_re", "s", "re"),
            ("s0_im", "s", "im"),
        ] {
            let from_csv: f64 = row[col(field)].parse().unwrap();
            let from_json = if key == "s" {
                case["s"][0][part].as_f64().unwrap()
            } else {
                case[key][part].as_f64().unwrap()
            };
            assert_eq!(from_csv, from_json, "{field} of case {i}");
        }
        let err: f64 = row[col("err")].parse().unwrap();
        assert_eq!(err, case["err"].as_f64().unwrap());
        assert_eq!(&row[col("method")], case["method"].as_str().unwrap());
    }
}

#[test]
fn completed_factor_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = problem(
        dir.path(),
        "completed.json",
        r#"{"r":2,"A":[[1.2,-0.6],[0.7,1.5]],"x":[0.3,0.8],"y":[0.45,0.2],"chi":[0,1],
            "s":[[{"re":1.6,"im":0.3},{"re":1.7,"im":-0.2}]],"variant":"COMPLETED"}"#,
    );
    let out = shintani(&["eval", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let case = &json(&out)["cases"][0];
    let c = |v: &Value| (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap());
    let (vr, vi) = c(&case["value"]);
    let (lr, li) = c(&case["normalized"]);
    let (fr, fi) = c(&case["factor"]);
    let (pr, pi) = (lr * fr - li * fi, lr * fi + li * fr);
    assert!(((vr - pr).powi(2) + (vi - pi).powi(2)).sqrt() < 1e-12 * (vr.hypot(vi)).max(1.0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // malformed JSON, wrong dimensions, unknown variant, zero matrix, missing file
    for (name, body) in [
        ("a.json", "{"),
        ("b.json", r#"{"r":2,"A":[1],"x":[0.5],"y":[0.5],"chi":[1],"s":[{"re":2,"im":0}]}"#),
        ("c.json", r#"{"r":1,"A":[1],"x":[0.5],"y":[0.5],"chi":[1],"s":[{"re":2,"im":0}],"variant":"X"}"#),
        ("d.json", r#"{"r":1,"A":[0],"x":[0.5],"y":[0.5],"chi":[1],"s":[{"re":2,"im":0}]}"#),
    ] {
        let path = problem(dir.path(), name, body);
        assert_eq!(shintani(&["eval", &path]).status.code(), Some(2), "{name}");
    }
    let missing = dir.path().join("none.json");
    assert_eq!(shintani(&["eval", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(shintani(&["check", "nonsense"]).status.code(), Some(2));
    assert_eq!(shintani(&["check", "fe", "--r", "4"]).status.code(), Some(2));
    assert_eq!(shintani(&["check", "fe", "--quad-step", "-1"]).status.code(), Some(2));

    // s = 1 is outside every region of the ordinary series at r = 1 with positive A
    let path = problem(
        dir.path(),
        "e.json",
        r#"{"r":1,"A":[1],"x":[0.5],"y":[0.5],"chi":[1],"s":[{"re":2,"im":0},{"re":1,"im":0}],
            "method":"dirichlet","variant":"ORDINARY"}"#,
    );
    let out = shintani(&["eval", &path]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json(&out);
    assert_eq!(rep["summary"]["errors"], 1);
    assert!(rep["cases"][0]["error"].is_null());
    assert!(rep["cases"][1]["error"].is_string());
    assert!(rep["cases"][1]["value"].is_null());

    // an impossible tolerance fails the sweep but still writes the report
    let out = shintani(&["check", "fe", "--samples", "2", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["summary"]["pass"], false);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("fe.json");
    let out_str = out_path.to_str().unwrap();
    let args = ["check", "fe", "--r", "1", "--samples", "4", "--seed", "9", "--out", out_str];
    assert_eq!(shintani(&args).status.code(), Some(0));
    let first = std::fs::read(&out_path).unwrap();
    assert_eq!(shintani(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&out_path).unwrap());

    let other = shintani(&["check", "fe", "--r", "1", "--samples", "4", "--seed", "10"]);
    assert_ne!(first, other.stdout);
}

#[test]
fn fe_sweep_r2_passes() {
    let out = shintani(&["check", "fe", "--r", "2", "--samples", "50", "--seed", "42", "--tol", "1e-8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rep = json(&out);
    assert_eq!(rep["summary"]["cases"], 50);
    assert_eq!(rep["summary"]["pass"], true);
    assert_eq!(rep["seed"], 42);
    assert_eq!(rep["config"]["r"], 2);
}

#[test]
fn special_sweep_reports_exact_zeros() {
    let out = shintani(&["check", "special", "--kmax", "2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rep = json(&out);
    let cases = rep["cases"].as_array().unwrap();
    let vanishing: Vec<&Value> = cases.iter().filter(|c| c["label"] == "vanishing").collect();
    assert!(!vanishing.is_empty());
    for c in vanishing {
        assert_eq!(c["lhs"]["re"], 0.0);
        assert_eq!(c["lhs"]["im"], 0.0);
        assert!(c["residual"].as_f64().unwrap() < 1e-10, "{c}");
    }
}

#[test]
fn oracle_sweep_r1() {
    let out = shintani(&["check", "oracle", "--r", "1", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rep = json(&out);
    assert!(rep["summary"]["max_residual"].as_f64().unwrap() <= 1e-9);
    let labels: Vec<&str> = rep["cases"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"triple") && labels.contains(&"bilateral"));
}

#[test]
fn check_csv_has_one_row_per_case() {
    let out = shintani(&["check", "derivative", "--samples", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.records().count(), 4);
}
