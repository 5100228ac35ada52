use std::process::{Command, Output};

use serde_json::Value;

fn idemkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn k0_of_two_by_two_matrices() {
    let out = idemkit(&["k0", "--instance", r#"{"kind":"matrix","n":2}"#]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["result"]["group"], "Z");
    assert_eq!(doc["result"]["class_map_samples"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_json_exits_one() {
    let out = idemkit(&["k0", "--instance", r#"{"kind":"matrix","#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["error"].is_string());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"command\": ").unwrap();
    let out = idemkit(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = idemkit(&["lift", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn printed_lift_exits_two_with_measured_defect() {
    let out = idemkit(&["lift", "--element", "0.1", "--variant", "printed", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(2));
    let defect = report(&out)["result"]["defect"].as_f64().unwrap();
    assert!(defect >= 0.1 && (defect - 0.16).abs() < 1e-9);
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "transfer",
        "--tower",
        r#"{"kind":"uhf","depth":3}"#,
        "--trials",
        "5",
        "--seed",
        "7",
    ];
    let a = idemkit(&args);
    let b = idemkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let out_path = dir.path().join("report.csv");
    std::fs::write(
        &config,
        format!(
            r#"{{"command":{{"kind":"collapse","n":4}},"format":"csv","out":{}}}"#,
            serde_json::to_string(out_path.to_str().unwrap()).unwrap()
        ),
    )
    .unwrap();
    let out = idemkit(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with("true,true")));
}

#[test]
fn descriptor_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tower.json");
    std::fs::write(&path, r#"{"kind":"cantor","depth":3}"#).unwrap();
    let out = idemkit(&["k0", "--tower", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["group"], "C(Cantor,Z)");
}

#[test]
fn jump_path_is_rejected() {
    let out = idemkit(&["path-trivialize", "--path", "jump", "--max-depth", "12"]);
    assert_eq!(out.status.code(), Some(1));
}
