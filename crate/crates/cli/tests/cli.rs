use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ising-quench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ising-quench")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn evolve_csv_is_deterministic_across_thread_counts() {
    let args = ["evolve", "--n", "12", "--g", "0.7", "--t-max", "3", "--dt", "0.1"];
    let one = bin().args(args).env("ISING_QUENCH_THREADS", "1").output().unwrap();
    let four = bin().args(args).env("ISING_QUENCH_THREADS", "4").output().unwrap();
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn evolve_header_and_columns() {
    let out = run(&["evolve", "--n", "8", "--g", "1.5", "--t-max", "1", "--dt", "0.25"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# ising-quench evolve");
    assert!(lines.contains(&"# n = 8"));
    assert!(lines.contains(&"# g = 1.5"));
    assert!(lines.iter().any(|l| l.starts_with("# time in units")));
    let data: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "t,sx,sy,sz,purity,czz,cxx,cxy,cxz,concurrence");
    assert_eq!(data.len(), 1 + 5);
    let first: Vec<f64> = data[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-12);
}

#[test]
fn unknown_flag_is_rejected() {
    let out = run(&["evolve", "--bogus", "1"]);
    assert!(!out.status.success());
}

#[test]
fn flag_foreign_to_command_is_rejected() {
    let out = run(&["evolve", "--window", "1,2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not apply"));
}

#[test]
fn invalid_j_list_is_rejected() {
    let out = run(&["string-op", "--n", "8", "--j-list", "1:9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn odd_ring_is_rejected() {
    assert!(!run(&["evolve", "--n", "7"]).status.success());
}

#[test]
fn string_op_columns() {
    let out = run(&["string-op", "--n", "10", "--j-list", "1,3", "--t-max", "1", "--dt", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "t,X_1,X_3"));
    assert!(text.contains("# j-list = 1,3"));
}

#[test]
fn ed_check_passes_on_small_ring() {
    let out = run(&["ed-check", "--n", "8", "--g", "1.0", "--t-max", "4", "--dt", "0.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS"));
    assert!(stdout(&out).contains("concurrence,"));
}

#[test]
fn ed_check_fails_on_impossible_tolerance() {
    let out = run(&["ed-check", "--n", "6", "--t-max", "2", "--dt", "0.5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ed_check_refuses_large_ring() {
    let out = run(&["ed-check", "--n", "14", "--t-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let csv = dir.path().join("out.csv");
    std::fs::write(&cfg, "# sweep\ncommand = sweep-g\nn = 8\ng_list = 0.5:0.5:1.5\nt-max = 1\ndt = 0.5\n").unwrap();
    let out = bin()
        .args(["sweep-g", "--config"])
        .arg(&cfg)
        .args(["--n", "10", "--output"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("# n = 10"));
    assert!(text.contains("# g-list = 0.5,1,1.5"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 3 * 3);
}

#[test]
fn config_file_unknown_key_or_wrong_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "n = 8\nspeed = 3\n").unwrap();
    assert!(!bin().args(["evolve", "--config"]).arg(&cfg).output().unwrap().status.success());
    std::fs::write(&cfg, "command = fit\n").unwrap();
    assert!(!bin().args(["evolve", "--config"]).arg(&cfg).output().unwrap().status.success());
}

#[test]
fn json_output_parses() {
    let out = run(&["limits", "--g", "0.5", "--t-max", "1", "--dt", "0.5", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["spec"]["command"], "limits");
    let rows = v["data"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!((rows[0]["cxx"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn fit_reports_formula_columns() {
    let out = run(&["fit", "--n", "60", "--g-list", "0.5,1.2", "--window", "4,10", "--dt", "0.1"]);
    // g = 1.2 oscillates through zero, so the log fit must refuse it
    assert!(!out.status.success());
    let out = run(&["fit", "--n", "60", "--g-list", "0.5", "--window", "4,10", "--dt", "0.1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "g,A,A_stddev,gamma,gamma_stddev,log_residual,samples,A_formula,gamma_quadrature");
    let row: Vec<f64> = data[1].split(',').map(|v| v.parse().unwrap()).collect();
    let a_formula = ((1.0 + (1.0f64 - 0.25).sqrt()) / 2.0).sqrt();
    assert!((row[7] - a_formula).abs() < 1e-12);
    assert!((row[3] - row[8]).abs() / row[8] < 0.1, "fit {} vs quadrature {}", row[3], row[8]);
}
