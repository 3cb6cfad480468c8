//! End-to-end checks of the `soot-bench` binary: exit codes, emitted files,
//! and the pinned CSV headers.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_soot-bench"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("soot-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// Small instance so each solve takes milliseconds.
fn small_config(dir: &Path) -> PathBuf {
    let path = dir.join("cfg.toml");
    std::fs::write(
        &path,
        "n = 96\ns = 9\nsigma_list = [0.01, 0.03]\nrealizations = 2\n\
         \n[soot]\nmax_outer = 40\n\n[baseline]\nouter_iters = 40\nista_iters = 10\n\
         \n[innerloop]\nj_values = [1, 3]\nmax_outer = 400\n\
         \n[grid]\nlambda_rel = [1e-2, 3e-2]\neta = [2e-2]\nrealizations = 1\n",
    )
    .unwrap();
    path
}

fn first_line(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).lines().next().unwrap_or_default().to_string()
}

fn run_ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn help_lists_every_subcommand() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["generate", "solve", "compare", "bench", "innerloops", "gridsearch"] {
        assert!(text.contains(sub), "--help does not mention `{sub}`");
    }
}

#[test]
fn usage_errors_exit_with_one() {
    let out = bin().args(["solve", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tmp_dir("badcfg");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "spike_prob = 1.5\n").unwrap();
    let out = bin()
        .args(["generate", "--config", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spike_prob"));

    // Negative σ from the command line takes the same path.
    let cfg = small_config(&dir);
    let out = bin()
        .args(["generate", "--config", cfg.to_str().unwrap(), "--sigma", "-0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_method_exits_with_one() {
    let dir = tmp_dir("badmethod");
    let cfg = small_config(&dir);
    let out = bin()
        .args(["solve", "--config", cfg.to_str().unwrap(), "--method", "nonsense"])
        .args(["--out", dir.join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonsense"));
}

#[test]
fn generate_writes_the_instance_files() {
    let dir = tmp_dir("gen");
    let cfg = small_config(&dir);
    let out_dir = dir.join("inst");
    run_ok(
        bin()
            .args(["generate", "--config", cfg.to_str().unwrap(), "--sigma", "0.03"])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    for f in ["x_true.csv", "h_true.csv", "y.csv", "manifest.json"] {
        assert!(out_dir.join(f).is_file(), "missing {f}");
    }
    let y = std::fs::read_to_string(out_dir.join("y.csv")).unwrap();
    assert_eq!(y.lines().count(), 96, "one value per sample, no header");
    assert!(y.lines().all(|l| l.parse::<f64>().is_ok()));
}

#[test]
fn solve_writes_estimates_and_a_trace() {
    let dir = tmp_dir("solve");
    let cfg = small_config(&dir);
    let out_dir = dir.join("run");
    let stdout = run_ok(
        bin()
            .args(["solve", "--config", cfg.to_str().unwrap(), "--aligned"])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    assert!(stdout.contains("soot"), "report names the method: {stdout}");
    assert!(stdout.contains("scalar-aligned"), "--aligned adds the diagnostic line");
    for f in ["x_hat.csv", "h_hat.csv", "trace.csv", "manifest.json"] {
        assert!(out_dir.join(f).is_file(), "missing {f}");
    }
    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert_eq!(first_line(trace.as_bytes()), "k,F,x_delta,h_delta,wall_time_s,nu_low,nu_high");
}

#[test]
fn compare_reports_both_methods() {
    let dir = tmp_dir("compare");
    let cfg = small_config(&dir);
    let out_dir = dir.join("cmp");
    let stdout = run_ok(
        bin()
            .args(["compare", "--config", cfg.to_str().unwrap()])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    assert!(stdout.contains("soot") && stdout.contains("l1l2"));
    for f in ["x_hat_soot.csv", "x_hat_l1l2.csv", "h_hat_soot.csv", "h_hat_l1l2.csv"] {
        assert!(out_dir.join(f).is_file(), "missing {f}");
    }
}

#[test]
fn bench_emits_the_metrics_table_with_pinned_header() {
    let dir = tmp_dir("bench");
    let cfg = small_config(&dir);
    let out_dir = dir.join("tbl");
    run_ok(
        bin()
            .args(["bench", "--config", cfg.to_str().unwrap()])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    let metrics = std::fs::read_to_string(out_dir.join("metrics.csv")).unwrap();
    assert_eq!(
        first_line(metrics.as_bytes()),
        "sigma,method,l2_signal,l1_signal,l2_kernel,l1_kernel,l2_obs,l1_obs,time_s,failures"
    );
    // 2 σ levels × 2 methods.
    assert_eq!(metrics.lines().count(), 5);
    assert!(out_dir.join("metrics_detail.csv").is_file());
    assert!(out_dir.join("manifest.json").is_file());
}

#[test]
fn innerloops_emits_the_study_table_with_pinned_header() {
    let dir = tmp_dir("inner");
    let cfg = small_config(&dir);
    let out_dir = dir.join("study");
    run_ok(
        bin()
            .args(["innerloops", "--config", cfg.to_str().unwrap()])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    let table = std::fs::read_to_string(out_dir.join("innerloops.csv")).unwrap();
    assert_eq!(first_line(table.as_bytes()), "J,mean_time_s,std_time_s,mean_l1_err");
    assert_eq!(table.lines().count(), 3, "one row per configured J");
}

#[test]
fn gridsearch_selects_a_cell_and_reports_it() {
    let dir = tmp_dir("grid");
    let cfg = small_config(&dir);
    let out_dir = dir.join("gs");
    let stdout = run_ok(
        bin()
            .args(["gridsearch", "--config", cfg.to_str().unwrap()])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    assert!(stdout.contains("best"), "summary line announces the selected cell: {stdout}");
    let grid = std::fs::read_to_string(out_dir.join("grid.csv")).unwrap();
    assert_eq!(
        first_line(grid.as_bytes()),
        "lambda_rel,alpha,beta,eta,mean_l1_err,mean_l2_err,failures"
    );
    assert_eq!(grid.lines().count(), 3, "two cells evaluated");
}
