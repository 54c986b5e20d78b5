use std::path::Path;
use std::process::{Command, Output};

use bursty_relay::figures::{figure, FigureName};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bursty-relay");
const EX1: [&str; 8] = ["--K", "2", "--M", "1", "--N", "1", "--L", "1"];

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn with_config(sub: &str, extra: &[&str]) -> Vec<String> {
    std::iter::once(sub).chain(EX1).chain(extra.iter().copied()).map(String::from).collect()
}

fn ok_stdout(args: &[String]) -> String {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[String]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

#[test]
fn region_lists_three_constraints() {
    let text = ok_stdout(&with_config("region", &["--traffic", "independent:0.25"]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines[1], "subset_mask,subset_size,bound,binding_side");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("3,2,0.5,"));
}

#[test]
fn threshold_line() {
    let text = ok_stdout(&with_config("threshold", &[]));
    assert_eq!(text.trim_end(), "case=C-F collision_free=true p_star=0.5");
    let none = ok_stdout(&["threshold", "--K", "2", "--M", "1", "--N", "1", "--L", "0"].map(String::from));
    assert!(none.trim_end().ends_with("p_star=none"), "{none}");
}

#[test]
fn sumdof_and_gain_sweep() {
    let text = ok_stdout(&with_config("sumdof", &["--traffic", "independent:0.75"]));
    assert_eq!(text.lines().nth(2).unwrap(), "0.75,1,0.9375");
    let text = ok_stdout(&with_config("gain", &["--traffic", "dependent:0", "--sweep", "0:0.25:1"]));
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows, ["0,0,0,0", "0.25,0.25,0.5,0.25", "0.5,0.5,1,0.5", "0.75,0.25,1,0.75", "1,0,1,1"]);
}

#[test]
fn figure_matches_library() {
    for f in FigureName::ALL {
        assert_eq!(ok_stdout(&["figure".to_string(), f.to_string()]), figure(f).unwrap());
    }
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let cases = [
        with_config("simulate", &["--traffic", "independent:0.4", "--slots", "20000", "--seed", "9"]),
        with_config("oracle-rank", &["--traffic", "dependent:0.5", "--slots", "30", "--seed", "4"]),
        with_config("oracle-slope", &["--traffic", "independent:0.25", "--seed", "2", "--subset", "1"]),
        vec!["figure".into(), "fig13".into()],
    ];
    for args in cases {
        assert_eq!(ok_stdout(&args), ok_stdout(&args), "{args:?}");
    }
}

#[test]
fn simulate_json_fields() {
    let v = json(&with_config("simulate", &["--traffic", "independent:0.5", "--slots", "20000", "--seed", "3"]));
    assert_eq!(v["slots"], 20000);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["formula"], 1.0);
    let throughput = v["throughput"].as_f64().unwrap();
    assert!((throughput - 1.0).abs() < 0.05);
    assert!((v["deviation"].as_f64().unwrap() - (throughput - 1.0).abs()).abs() < 1e-12);
    assert!(v["buffer_high_water"].as_u64().is_some());
}

#[test]
fn oracle_rank_matches_simulator() {
    for field in ["prime", "real"] {
        let v = json(&with_config("oracle-rank", &["--traffic", "independent:0.5", "--slots", "40", "--seed", "7", "--field", field]));
        assert_eq!(v["rank"], v["delivered"]);
        assert_eq!(v["matches_simulator"], true);
        assert_eq!(v["field"], field);
    }
}

#[test]
fn oracle_slope_tracks_cut_bound() {
    let v = json(&with_config("oracle-slope", &["--traffic", "independent:0.25", "--seed", "1", "--subset", "1,2"]));
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope - v["cut_bound"].as_f64().unwrap()).abs() < 0.05);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    let v = json(&with_config(
        "oracle-slope",
        &["--traffic", "independent:0.25", "--seed", "1", "--subset", "1", "--P-grid", "1e4,1e6,1e8"],
    ));
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
}

#[test]
fn out_writes_file_and_nothing_else() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = run(&["figure", "fig2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), figure(FigureName::Fig2).unwrap());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn traffic_file_matches_builtin_law() {
    let dir = tempfile::tempdir().unwrap();
    let law = r#"{"K": 2, "mass": [{"pattern": [], "p": 0.5}, {"pattern": [1, 2], "p": 0.5}]}"#;
    let path = write(dir.path(), "law.json", law);
    let from_file = ok_stdout(&with_config("region", &["--traffic", &format!("file:{path}")]));
    let builtin = ok_stdout(&with_config("region", &["--traffic", "dependent:0.5"]));
    let body = |s: &str| s.lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(body(&from_file), body(&builtin));
}

#[test]
fn trace_file_drives_simulator_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "trace.txt", "1,1\n0,0\n1,0\n");
    let v = json(&with_config("simulate", &["--trace", &path]));
    assert_eq!(v["slots"], 3);
    assert!((v["throughput"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&with_config("oracle-rank", &["--trace", &path]));
    assert_eq!(v["rank"], 3);
    assert_eq!(v["matches_simulator"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["region", "--K", "2"]).status.code(), Some(2));
    let mismatched: Vec<String> = ["region", "--K", "2", "--M", "1,1,1", "--N", "1", "--L", "1", "--traffic", "independent:0.2"]
        .map(String::from)
        .to_vec();
    assert_eq!(Command::new(BIN).args(&mismatched).output().unwrap().status.code(), Some(2));
    let bad_sweep = with_config("gain", &["--traffic", "independent:0.5", "--sweep", "0:0:1"]);
    assert_eq!(Command::new(BIN).args(&bad_sweep).output().unwrap().status.code(), Some(2));
    let missing = with_config("region", &["--traffic", "file:/no/such/law.json"]);
    let out = Command::new(BIN).args(&missing).output().unwrap();
    assert_ne!(out.status.code(), Some(0));
    assert!(!out.stderr.is_empty());
    let too_many_users = ["oracle-rank", "--K", "5", "--M", "1", "--N", "1", "--L", "1", "--traffic", "independent:0.5", "--slots", "5"];
    assert_eq!(run(&too_many_users).status.code(), Some(1));
    let asymmetric = ["threshold", "--K", "2", "--M", "1,2", "--N", "1", "--L", "1"];
    assert_eq!(run(&asymmetric).status.code(), Some(1));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(!help.stdout.is_empty());
}
