use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use usbp_core::operators::{build_lgl_usbp, OperatorBundle};

fn usbp_dg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usbp-dg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn header(text: &str) -> Value {
    let line = text.lines().next().expect("header line");
    serde_json::from_str(line.strip_prefix('#').expect("# prefix")).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(usbp_dg(&[]).status.code(), Some(2));
    assert_eq!(usbp_dg(&["bogus"]).status.code(), Some(2));
    assert_eq!(usbp_dg(&["spectrum", "--N", "1"]).status.code(), Some(2));
    assert_eq!(
        usbp_dg(&["spectrum", "--lambda", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        usbp_dg(&["kelvin-helmholtz", "--J", "15"]).status.code(),
        Some(2)
    );
    assert_eq!(usbp_dg(&["--help"]).status.code(), Some(0));
    let ok = usbp_dg(&["spectrum", "--N", "3", "--J", "4"]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
}

#[test]
fn csv_starts_with_json_header() {
    let out = usbp_dg(&[
        "spectrum", "--N", "4", "--lambda", "-1e-2", "--J", "4", "--seed", "7",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let h = header(&text);
    assert_eq!(h["seed"], 7);
    assert_eq!(h["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(h["config"]["N"], 4);
    assert_eq!(h["config"]["lambda"], -1e-2);
    assert!(h["summary"]["max_real_part"].as_f64().unwrap() <= 1e-10);
    let mut lines = text.lines().skip(1);
    assert_eq!(lines.next(), Some("re,im"));
    assert_eq!(lines.count(), 4 * 4);
}

#[test]
fn operator_dump_round_trips() {
    let out = usbp_dg(&["operator-dump", "--N", "5", "--lambda", "-0.5"]);
    assert!(out.status.success());
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let meta = v.as_object_mut().unwrap().remove("meta").unwrap();
    assert_eq!(meta["config"]["experiment"], "operator-dump");
    let pair = OperatorBundle::from_json(&v.to_string())
        .unwrap()
        .to_pair()
        .unwrap();
    // The experiment parameter damps the top mode with eigenvalue 2 lambda.
    let expected = build_lgl_usbp(5, -1.0).unwrap();
    assert_eq!(pair.d_plus, expected.d_plus);
    assert_eq!(pair.d_minus, expected.d_minus);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"N": 3, "lambda": -0.01, "J": [2, 4], "samples": 2}"#,
    )
    .unwrap();
    let out_path = dir.path().join("stability.csv");
    let out = usbp_dg(&[
        "local-stability",
        "--config",
        cfg.to_str().unwrap(),
        "--J",
        "8",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&out_path).unwrap();
    let h = header(&text);
    assert_eq!(h["config"]["J"], serde_json::json!([8]));
    assert_eq!(h["config"]["lambda"], -0.01);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r.starts_with("3,") && r.contains(",8,")));
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "local-stability",
        "--N",
        "4",
        "--J",
        "2,4",
        "--samples",
        "3",
        "--seed",
        "11",
    ];
    let a = usbp_dg(&args);
    let b = usbp_dg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn integrated_runs_write_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("kh.csv");
    let out = usbp_dg(&[
        "kelvin-helmholtz",
        "--J",
        "4",
        "--t-end",
        "0.05",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = fs::read_to_string(&out_path).unwrap();
    assert!(table.lines().nth(2).unwrap().contains(",finished,"));
    let diag = fs::read_to_string(dir.path().join("kh.J4.diagnostics.csv")).unwrap();
    assert_eq!(header(&diag)["summary"]["run"], "J4");
    assert!(diag.lines().count() > 3);
}
