//! End-to-end checks of the command-line interface: exit codes, flag and
//! config-file precedence, deterministic output, and thread-count
//! independence.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qia-sim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_passes_and_prints_one_line_per_check() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 5);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")));
}

#[test]
fn invalid_configuration_exits_with_one() {
    for args in [
        &["run", "--protocol", "4"][..],
        &["run", "--attack", "quantum-zeno"][..],
        &["run", "--trials", "0"][..],
        &["run", "--protocol", "1", "--attack", "ancilla-forge"][..],
        &["run", "--protocol", "3", "--attack", "forge"][..],
        &["run", "--coeffs", "1,0,0"][..],
        &["curve", "--n-min", "5", "--n-max", "2", "--out", "/tmp/x.csv"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn unparseable_flags_exit_with_one() {
    let out = run(&["run", "--protocol", "one"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn io_failure_exits_with_two() {
    let out = run(&[
        "run",
        "--trials",
        "10",
        "--out",
        "/nonexistent-dir/result.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let read = |p: &Path| std::fs::read(p).unwrap();
    let args = |path: &str| {
        vec![
            "run".to_string(),
            "--protocol".into(),
            "2".into(),
            "--attack".into(),
            "impersonation".into(),
            "--n".into(),
            "3".into(),
            "--trials".into(),
            "2000".into(),
            "--seed".into(),
            "7".into(),
            "--deterministic".into(),
            "--out".into(),
            path.into(),
        ]
    };
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    assert!(bin().args(args(p1.to_str().unwrap())).output().unwrap().status.success());
    assert!(bin().args(args(p2.to_str().unwrap())).output().unwrap().status.success());
    assert_eq!(read(&p1), read(&p2));
}

#[test]
fn the_thread_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let status = bin()
            .env("QIA_SIM_THREADS", threads)
            .args([
                "run",
                "--protocol",
                "3",
                "--attack",
                "impersonation",
                "--n",
                "2",
                "--trials",
                "3000",
                "--seed",
                "5",
                "--deterministic",
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn timestamp_header_appears_unless_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let stamped = dir.path().join("stamped.csv");
    let plain = dir.path().join("plain.csv");
    assert!(bin()
        .args(["run", "--trials", "50", "--out"])
        .arg(&stamped)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["run", "--trials", "50", "--deterministic", "--out"])
        .arg(&plain)
        .status()
        .unwrap()
        .success());
    let stamped = std::fs::read_to_string(&stamped).unwrap();
    let plain = std::fs::read_to_string(&plain).unwrap();
    assert!(stamped.starts_with("# generated-unix "));
    assert!(plain.starts_with("protocol,attack,"));
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "# experiment setup\nprotocol=2\nattack=impersonation\nn=4\ntrials=500\nseed=3\n",
    )
    .unwrap();

    // File values apply...
    let out = bin()
        .args(["run", "--deterministic", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("2,impersonation,4,500,"));

    // ...but explicit flags win.
    let out = bin()
        .args(["run", "--protocol", "1", "--n", "2", "--deterministic", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("1,impersonation,2,500,"));
}

#[test]
fn bad_config_files_exit_with_one_or_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "protocole=2\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .args(["run", "--config", "/nonexistent.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn the_spec_run_example_lands_in_its_interval() {
    let out = run(&[
        "run",
        "--protocol",
        "1",
        "--attack",
        "impersonation",
        "--n",
        "3",
        "--trials",
        "10000",
        "--seed",
        "42",
        "--deterministic",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let rate: f64 = fields[5].parse().unwrap();
    let closed: f64 = fields[8].parse().unwrap();
    assert!((0.974..=0.994).contains(&rate), "rate {rate}");
    assert_eq!(closed, 0.984375);
}

#[test]
fn honest_runs_report_zero_detections() {
    for protocol in ["1", "2", "3"] {
        let out = run(&[
            "run", "--protocol", protocol, "--attack", "none", "--n", "4", "--trials", "300",
            "--deterministic",
        ]);
        assert!(out.status.success());
        let text = stdout(&out);
        let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields[4], "0", "protocol {protocol} detections");
    }
}

#[test]
fn the_extremal_ancilla_forge_passes_three_eighths() {
    let out = run(&[
        "run",
        "--protocol",
        "3",
        "--attack",
        "ancilla-forge",
        "--coeffs",
        "0,0.70710678118654752,0.70710678118654752,0",
        "--n",
        "1",
        "--trials",
        "20000",
        "--seed",
        "11",
        "--deterministic",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let detection_rate: f64 = fields[5].parse().unwrap();
    let pass_rate = 1.0 - detection_rate;
    assert!((pass_rate - 0.375).abs() < 0.015, "pass rate {pass_rate}");
}

#[test]
fn info_tables_emits_self_checked_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("info.csv");
    let out = bin()
        .args(["info-tables", "--positions", "20000", "--deterministic", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "protocol,quantity,closed_form,monte_carlo,tolerance,within"
    );
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("P1,I(A:B),1,")));
    assert!(rows.iter().any(|r| r.starts_with("P3,chi(rho_2),0,")));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}
