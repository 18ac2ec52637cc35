use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vicfluor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vicfluor"))
        .args(args)
        .env_remove("VICFLUOR_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn steady_sweep_has_header_and_rows() {
    let out = vicfluor(&["steady", "--sweep", "omega-a", "--sweep-min", "0.5", "--sweep-max", "5", "--sweep-points", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# sweep=omega_a"));
    assert!(lines[1].starts_with("omega_a,rho11,rho22,rho33,rho44"));
    assert_eq!(lines.len(), 12);
    assert!(lines[2..].iter().all(|l| l.split(',').count() == 15));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["spectrum", "--omega-a", "4", "--omega-b", "0.6", "--delta", "1", "--points", "301"];
    let serial = Command::new(env!("CARGO_BIN_EXE_vicfluor")).args(args).env("VICFLUOR_THREADS", "1").output().unwrap();
    let parallel = Command::new(env!("CARGO_BIN_EXE_vicfluor")).args(args).env("VICFLUOR_THREADS", "4").output().unwrap();
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(vicfluor(&args).stdout, serial.stdout);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["steady", "--gamma12", "0.2"],
        vec!["steady", "--gamma", "-1"],
        vec!["spectrum", "--points", "1"],
        vec!["dressed", "--delta", "1"],
        vec!["figure", "9"],
        vec!["steady", "--omega-bb", "1"],
    ] {
        let out = vicfluor(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_vicfluor"))
        .args(["steady"])
        .env("VICFLUOR_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    let out = vicfluor(&["steady", "--omega-a", "0", "--omega-b", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("singular"), "{msg}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"omega_a": 2.0, "omega_b": 0.5, "delta": 3.0, "channel": "sigma", "points": 21}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = vicfluor(&["spectrum", "--config", cfg, "--delta", "-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let head = text.lines().next().unwrap();
    assert!(head.contains("channel=sigma"), "{head}");
    assert!(head.contains("delta=-1 "), "{head}");
    assert!(head.contains("omega_a=2 "), "{head}");
    assert_eq!(text.lines().count(), 23);

    fs::write(dir.path().join("bad.json"), r#"{"omegaa": 1}"#).unwrap();
    let bad = dir.path().join("bad.json");
    let out = vicfluor(&["steady", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_6a_writes_three_traces_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = vicfluor(&["figure", "6a", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut csv: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    csv.sort();
    assert_eq!(csv, ["fig6a_phi_0.csv", "fig6a_phi_pi2.csv", "fig6a_phi_pi4.csv"]);
    for name in &csv {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(text.lines().count(), 4003);
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig6a_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["curves"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["curves"][0]["channel"], "sigma");
}

#[test]
fn dressed_table_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = vicfluor(&["dressed", "--omega-a", "15", "--omega-b", "11", "--points", "101", "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("state,eigenvalue,c1,c2,c3,c4,population"));
    assert!(text.contains("channel,A1,A2,A3,A4,A5,W1,W2"));
    assert!(out.stderr.is_empty(), "no advisory expected at strong driving");
    assert_eq!(fs::read_to_string(&trace).unwrap().lines().count(), 103);

    let weak = vicfluor(&["dressed", "--omega-a", "2", "--omega-b", "1"]);
    assert!(weak.status.success());
    assert!(String::from_utf8_lossy(&weak.stderr).contains("secular"));
}

#[test]
fn liouvillian_dump_and_single_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let out = vicfluor(&["steady", "--dump-liouvillian", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(Path::new(&path).exists());

    let out = vicfluor(&["verify", "--criterion", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("[PASS]  9"));
    assert_eq!(vicfluor(&["verify", "--criterion", "13"]).status.code(), Some(2));
}
