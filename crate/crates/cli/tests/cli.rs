use std::process::{Command, Output};

use serde_json::Value;

fn gwsql(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwsql")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// CSV cells and JSON values describe the same number, boolean, text or
/// absence.
fn same_cell(csv: &str, json: &Value) -> bool {
    match json {
        Value::Null => csv.is_empty(),
        Value::Bool(b) => csv == b.to_string(),
        Value::String(s) => csv == s,
        Value::Number(n) => csv.parse::<f64>().ok() == n.as_f64(),
        _ => false,
    }
}

fn assert_round_trip(args: &[&str]) {
    let csv_out = gwsql(&[args, &["--format", "csv"]].concat());
    let json_out = gwsql(&[args, &["--format", "json"]].concat());
    assert_eq!(csv_out.status.code(), json_out.status.code());
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let json: Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let rows = json.as_array().unwrap();
    let records: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    assert!(!rows.is_empty());
    for (record, row) in records.iter().zip(rows) {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.keys().map(String::as_str).collect::<Vec<_>>(), headers.iter().collect::<Vec<_>>());
        for (key, cell) in headers.iter().zip(record.iter()) {
            assert!(same_cell(cell, &obj[key]), "{args:?} {key}: csv `{cell}` json {}", obj[key]);
        }
    }
}

#[test]
fn csv_and_json_carry_identical_values() {
    assert_round_trip(&["constants", "--temperature", "100"]);
    assert_round_trip(&["signal", "--t-steps", "17", "--temperature", "3"]);
    assert_round_trip(&["sweep", "--T-min", "1e-9", "--T-max", "1e10", "--T-steps", "20", "--log-grid"]);
    assert_round_trip(&["sweep", "--t-min", "0", "--t-max", "4", "--t-steps", "5"]);
    assert_round_trip(&["verify", "--nbar", "0"]);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["signal", "--t-steps", "33", "--photon-average", "poissonian"][..],
        &["sweep", "--T-min", "0", "--T-max", "300", "--T-steps", "7", "--format", "json"][..],
        &["verify"][..],
    ] {
        let a = gwsql(args);
        let b = gwsql(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn signal_header_and_first_row() {
    let out = gwsql(&["signal", "--t-steps", "3"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t[s],theta_g[-],theta_l[-],I_ground_over_IN[-],D_ground_over_IN2[-],I_thermal_over_IN[-],D_thermal_over_IN2[-]"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..4], &["0", "0", "0", "0"]);
    // at t = 0 only the zero-point spread of the mirror remains
    let d: f64 = first[4].parse().unwrap();
    let g: f64 = 2.517179912721204e-12;
    assert!((d - 0.5 * (-(-g * g).exp_m1()) * (1.0 + (-g * g).exp())).abs() < 1e-30);
}

#[test]
fn exit_status_contract() {
    assert_eq!(gwsql(&["constants"]).status.code(), Some(0));
    assert_eq!(gwsql(&["--help"]).status.code(), Some(0));
    assert_eq!(gwsql(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(gwsql(&["constants", "--mass", "0"]).status.code(), Some(1));
    assert_eq!(gwsql(&["sweep"]).status.code(), Some(1));
    assert_eq!(gwsql(&["sweep", "--T-steps", "0"]).status.code(), Some(1));
    assert_eq!(gwsql(&["verify", "--desk-photons", "80"]).status.code(), Some(1));
    assert_eq!(gwsql(&["verify", "--use-printed-eq5"]).status.code(), Some(2));
    assert_eq!(gwsql(&["verify", "--n-osc", "8"]).status.code(), Some(3));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("detector.cfg");
    std::fs::write(&cfg, "# heavier mirror\nmass = 40\nt_obs = 2\n").unwrap();
    let path = cfg.to_str().unwrap();

    let sql = |extra: &[&str]| -> f64 {
        let out = gwsql(&[&["sql", "--format", "json", "--config", path][..], extra].concat());
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v[0]["h_vacuum[-]"].as_f64().unwrap()
    };
    let base = gwsql(&["sql", "--format", "json"]);
    let base: Value = serde_json::from_slice(&base.stdout).unwrap();
    let base = base[0]["h_vacuum[-]"].as_f64().unwrap();
    // mass ×4 halves h, doubling the time halves it again
    assert!((sql(&[]) / base - 0.25).abs() < 1e-12);
    // the flag wins over the file
    assert!((sql(&["--t-obs", "1"]) / base - 0.5).abs() < 1e-12);

    std::fs::write(&cfg, "mass = 40\nwavelength = 1e-6\n").unwrap();
    let out = gwsql(&["sql", "--config", path]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("wavelength") && err.contains("omega-g") && err.contains("t-obs"), "{err}");
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sweep.csv");
    let out = gwsql(&["sweep", "--T-min", "0", "--T-max", "100", "--T-steps", "2", "--out", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("exceeds vacuum limit by 6.61e5"));
}

#[test]
fn zero_optical_frequency_disables_the_couplings() {
    let out = gwsql(&["constants", "--omega", "0", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["g[-]"].as_f64(), Some(0.0));
    assert_eq!(v[0]["kappa[1/s]"].as_f64(), Some(0.0));
}

#[test]
fn verify_report_fields() {
    let out = gwsql(&["verify", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in v.as_array().unwrap() {
        let keys: Vec<_> = row.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["check", "expected", "actual", "abs_err", "rel_err", "tol", "pass"]);
        assert_eq!(row["pass"], Value::Bool(true));
    }
}
