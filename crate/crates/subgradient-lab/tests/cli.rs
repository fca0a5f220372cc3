//! End-to-end checks of the `sublab` binary: exit codes, artifact schemas,
//! config-file merging, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn sublab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn spectrum_roundtrip_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(dir.path(), &["spectrum", "--n", "4", "--eps", "0.125"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("max |closed - numeric|"));
    let csv = std::fs::read_to_string(dir.path().join("out/spectrum_n4.csv")).unwrap();
    assert!(csv.starts_with("index,closed_form,numeric,abs_diff\n"));
    assert_eq!(csv.lines().count(), 9); // header + 2n rows
    let meta = std::fs::read_to_string(dir.path().join("out/spectrum_n4.meta.json")).unwrap();
    assert!(meta.contains("\"command\": \"spectrum\""));
}

#[test]
fn spectrum_rejects_infeasible_weight() {
    let dir = tempfile::tempdir().unwrap();
    // eps * n >= 1 breaks the closed-form precondition
    let out = sublab(dir.path(), &["spectrum", "--n", "4", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps"));
}

#[test]
fn unknown_arguments_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(
        dir.path(),
        &["spectrum", "--n", "4", "--eps", "0.1", "--bogus"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = sublab(dir.path(), &["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexample_pass_line_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(
        dir.path(),
        &["counterexample", "--n", "4", "--eps", "0.25", "--t", "5000"],
    );
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS"));
    let csv = std::fs::read_to_string(dir.path().join("out/counterexample_n4.csv")).unwrap();
    assert!(csv.starts_with("t,y,eps_sqrt_t_y,x_v_solver,abs_diff\n"));
    assert_eq!(csv.lines().count(), 5001);
}

#[test]
fn counterexample_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // a box this tight activates the projection at eps = 1/16
    let out = sublab(
        dir.path(),
        &[
            "counterexample",
            "--n",
            "16",
            "--eps",
            "0.0625",
            "--a",
            "1.0",
            "--t",
            "3000",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn independence_smoke_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(
        dir.path(),
        &[
            "fig-independence",
            "--n-list",
            "4",
            "--beta",
            "0.5",
            "--t",
            "10",
            "--svg",
        ],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("out/independence_beta0.5_n4.csv")).unwrap();
    assert!(csv.starts_with("t,scaled_gap,below_one\n"));
    assert_eq!(csv.lines().count(), 11);
    assert!(dir.path().join("out/independence_beta0.5.svg").exists());
}

#[test]
fn inversion_deterministic_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "fig-inversion",
        "--beta-grid",
        "0.6,0.8",
        "--runs",
        "3",
        "--cap",
        "50000",
        "--seed",
        "11",
        "--svg",
    ];
    let out = sublab(dir.path(), &args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let first = std::fs::read_to_string(dir.path().join("out/inversion.csv")).unwrap();
    assert!(first
        .starts_with("beta,mean_iters_centralized,se_c,mean_iters_distributed,se_d,capped_runs\n"));
    assert_eq!(first.lines().count(), 3);
    assert!(dir.path().join("out/inversion.svg").exists());
    let out = sublab(dir.path(), &args);
    assert!(out.status.success());
    let second = std::fs::read_to_string(dir.path().join("out/inversion.csv")).unwrap();
    assert_eq!(first, second, "same seed must give byte-identical CSV");
}

#[test]
fn run_subcommand_with_adversary() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(
        dir.path(),
        &[
            "run",
            "--graph",
            "gnprime:4",
            "--eps",
            "0.25",
            "--schedule",
            "poly:0.5",
            "--t",
            "200",
            "--adversarial",
            "--svg",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("out/run.csv")).unwrap();
    assert!(csv.starts_with("t,gap,scaled_gap,disagreement,s_norm1,avg_gap\n"));
    assert_eq!(csv.lines().count(), 201);
    assert!(dir.path().join("out/run.svg").exists());
}

#[test]
fn run_quartic_with_data_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(
        dir.path(),
        &[
            "run",
            "--graph",
            "line:10",
            "--eps",
            "0.25",
            "--problem",
            "quartic",
            "--k",
            "10",
            "--schedule",
            "poly:0.75",
            "--t",
            "500",
            "--dump-data",
            "--seed",
            "3",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let data = std::fs::read_to_string(dir.path().join("out/run_data.csv")).unwrap();
    assert!(data.starts_with("a0,a1,b\n"));
    assert_eq!(data.lines().count(), 11);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("lab.conf"),
        "n=4\neps=0.125\nthreads=1\n# comment line\nunused=1\n",
    )
    .unwrap();
    let out = sublab(dir.path(), &["spectrum", "--config", "lab.conf"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("n=4"));

    // an infeasible eps in the file is overridden by the flag
    std::fs::write(dir.path().join("bad.conf"), "n=4\neps=0.5\n").unwrap();
    let out = sublab(
        dir.path(),
        &["spectrum", "--config", "bad.conf", "--eps", "0.125"],
    );
    assert!(out.status.success());
    let out = sublab(dir.path(), &["spectrum", "--config", "bad.conf"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = sublab(dir.path(), &["verify", "--suite", "schedule"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("checks, 0 failed"));
    let out = sublab(dir.path(), &["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    // a 4-node path written in the edge-list format
    std::fs::write(dir.path().join("path.graph"), "n 4\n0 1\n1 2\n2 3\n").unwrap();
    let out = sublab(
        dir.path(),
        &[
            "run",
            "--graph",
            "file:path.graph",
            "--eps",
            "0.25",
            "--problem",
            "quartic",
            "--t",
            "50",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
