use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use are_lab::cli::io::{read_curve, read_pairs, write_curve};
use serde_json::Value;

fn are_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_are-lab")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_file(name: &str, body: &str) -> String {
    let p = tmp(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn stat_reports_both_statistics() {
    let p = csv_file("sorted.csv", "x,y\n1,1\n2,2\n3,3\n");
    let v = stdout_json(&are_lab(&["stat", "--in", &p]));
    assert_eq!(v["n"], 3);
    assert_eq!(v["T"], 1.0);
    assert_eq!(v["S"], 1.0);

    let p = csv_file("four.csv", "x,y\n1,2\n2,1\n3,4\n4,3\n");
    let v = stdout_json(&are_lab(&["stat", "--in", &p]));
    assert!((v["T"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((v["S"].as_f64().unwrap() - 0.6).abs() < 1e-15);
    // z_T = T·√n·3/2
    assert!((v["z_T"].as_f64().unwrap() - 1.0).abs() < 1e-15);

    let o = are_lab(&["stat", "--in", &p, "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,T,S,z_T,z_S,p_T,p_S\n4,"), "{text}");
}

#[test]
fn stat_input_errors() {
    let p = csv_file("tie.csv", "x,y\n1,1\n1,2\n3,3\n");
    let o = are_lab(&["stat", "--in", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tied values in x"));

    let p = csv_file("bad.csv", "x,y\n1,1\n2,oops\n3,3\n");
    let o = are_lab(&["stat", "--in", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));

    let p = csv_file("header.csv", "a,b\n1,1\n2,2\n3,3\n");
    assert_eq!(are_lab(&["stat", "--in", &p]).status.code(), Some(2));

    let p = csv_file("short.csv", "x,y\n1,1\n2,2\n");
    assert_eq!(are_lab(&["stat", "--in", &p]).status.code(), Some(2));

    let missing = tmp("missing.csv");
    assert_eq!(are_lab(&["stat", "--in", missing.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn are_json_follows_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/are_result.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();

    let ol = stdout_json(&are_lab(&["are", "--model", "micd-ol", "--theta0", "0", "--method", "closed-form"]));
    assert_eq!(ol["value"], 2.25);
    assert_eq!(ol["method"], "closed-form");

    let al = stdout_json(&are_lab(&["are", "--model", "micd-al", "--theta0", "0", "--method", "numeric"]));
    assert_eq!(al["value"], "inf");
    assert_eq!(al["method"], "limit-ratio");

    let fr = stdout_json(&are_lab(&["are", "--model", "frank", "--theta0", "-2", "--side", "right"]));
    assert_eq!(fr["side"], "right");
    assert_eq!(fr["method"], "derivative-ratio");

    for v in [&ol, &al, &fr] {
        let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{v}: {errors:?}");
    }
    let mut bad = ol.clone();
    bad["value"] = Value::Null;
    assert!(!validator.is_valid(&bad));

    let o = are_lab(&["are", "--model", "clayton", "--theta0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = are_lab(&["are", "--model", "fgm", "--theta0", "0", "--method", "closed-form"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_round_trips_byte_for_byte() {
    let a = tmp("curve_a.csv");
    let o = are_lab(&[
        "curve", "--model", "micd-os", "--from", "-0.9", "--to", "0.9", "--steps", "18", "--out", a.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows = read_curve(&a).unwrap();
    assert_eq!(rows.len(), 19);
    assert_eq!(rows[0].0, -0.9);
    assert_eq!(rows[18].0, 0.9);
    let b = tmp("curve_b.csv");
    write_curve(&b, &rows).unwrap();
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(String::from_utf8(ta).unwrap().starts_with("theta,are\n"));

    let j = tmp("curve.json");
    let o = are_lab(&[
        "curve", "--model", "micd-al", "--from", "0", "--to", "0.5", "--steps", "5", "--out", j.to_str().unwrap(),
        "--format", "json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&fs::read(&j).unwrap()).unwrap();
    assert_eq!(v[0]["are"], "inf");
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn sample_is_seeded_and_readable() {
    let run = |name: &str, seed: &str| {
        let p = tmp(name);
        let o = are_lab(&[
            "sample", "--model", "frank", "--theta", "3", "--n", "200", "--seed", seed, "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        fs::read(&p).unwrap()
    };
    let a = run("s1.csv", "9");
    assert_eq!(a, run("s2.csv", "9"));
    assert_ne!(a, run("s3.csv", "10"));
    let s = read_pairs(&tmp("s1.csv")).unwrap();
    assert_eq!(s.len(), 200);
    let v = stdout_json(&are_lab(&["stat", "--in", tmp("s1.csv").to_str().unwrap()]));
    assert!(v["T"].as_f64().unwrap() > 0.0);
}

#[test]
fn power_reports_and_rejects_bad_levels() {
    let o = are_lab(&[
        "power", "--model", "fgm", "--theta0", "0", "--theta", "0.6", "--reps", "200", "--seed", "1", "--alpha2",
        "0.1", "--beta2", "0.2",
    ]);
    let v = stdout_json(&o);
    assert_eq!(v["model"], "fgm");
    assert!(v["t"]["n_required"].as_u64().unwrap() > 0);
    assert!(v["invariance"]["band_2se"].as_f64().unwrap() > 0.0);

    let o = are_lab(&["power", "--model", "bvn", "--theta0", "0", "--theta", "0.15", "--alpha", "0.6", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: configuration error"));
}

#[test]
fn check_suites_pass() {
    for suite in ["constants", "micd", "theorem", "oracle"] {
        let o = are_lab(&["check", "--suite", suite]);
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(o.status.success(), "{suite}:\n{text}");
        assert!(!text.contains("FAIL"), "{text}");
    }
}
