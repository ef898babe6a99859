//! Subcommand smoke tests against the compiled binary, including the
//! documented exit codes: 0 success, 1 usage/config, 2 data, 3 numerical.

use std::path::Path;
use std::process::{Command, Output};

use delabel::market::{write_csv, CsvSchema};
use delabel::synthetic::sine_with_noise;

fn delabel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delabel"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_fixture_csv(dir: &Path, n: usize) -> String {
    let series = sine_with_noise(n, 25.0, 200.0, 20.0, 8.0, 3);
    let path = dir.join("prices.csv");
    write_csv(&series, &path, &CsvSchema::default()).unwrap();
    path.to_string_lossy().to_string()
}

#[test]
fn ingest_reports_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 40);
    let out = delabel(&["ingest", "--data", &csv], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("observations: 40"));
}

#[test]
fn missing_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = delabel(&["ingest", "--data", "absent.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flag_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = delabel(&["ingest", "--no-such-flag"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn negative_tau_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 40);
    let out = delabel(
        &["label", "--data", &csv, "--tau", "-0.5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn label_and_sweep_write_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 40);
    let out = delabel(
        &["label", "--data", &csv, "--tau", "0.01", "--out", "labels.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let labels = std::fs::read_to_string(dir.path().join("labels.csv")).unwrap();
    assert!(labels.starts_with("timestamp,return,label,tau,source\n"));
    assert_eq!(labels.lines().count(), 40); // header + 39 returns

    let out = delabel(
        &[
            "label", "--data", &csv, "--tau-grid", "0,0.01,0.05", "--out", "counts.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let counts = std::fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert_eq!(counts.lines().count(), 4);
}

#[test]
fn indicators_then_diff_signals() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 150);
    let out = delabel(
        &[
            "indicators", "--data", &csv, "--ma-short", "5", "--ma-long", "15", "--out", "a.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = delabel(
        &[
            "diff-signals",
            "--original",
            "a.csv",
            "--denoised",
            "a.csv",
            "--out",
            "diff",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("0 unmatched original"));
    assert!(dir.path().join("diff.csv").exists());
    assert!(dir.path().join("diff.md").exists());
}

#[test]
fn train_svm_saves_model() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 80);
    let out = delabel(
        &[
            "train-svm", "--data", &csv, "--tau", "0", "--window", "5", "--out", "svm.dlsv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("test macro-F1"));
    assert!(dir.path().join("svm.dlsv").exists());
}

#[test]
fn run_with_config_and_overrides_then_report_regenerates() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 100);
    let config = format!(
        "seed = 3\ntau_grid = [0.0, 0.01]\n\n[data]\npath = \"{csv}\"\n\n[autoencoder]\nepochs = 40\n"
    );
    std::fs::write(dir.path().join("run.toml"), config).unwrap();
    let out = delabel(
        &[
            "run",
            "--config",
            "run.toml",
            "--out",
            "results",
            "--structure",
            "combined",
            "--leakage-mode",
            "train-segment-only",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let results = dir.path().join("results");
    for artifact in ["report.json", "f1_vs_tau.csv", "price_overlay.svg", "summary.md"] {
        assert!(results.join(artifact).exists(), "missing {artifact}");
    }

    // Regenerate into a second directory from the stored report.
    let out = delabel(
        &[
            "report",
            "--report",
            "results/report.json",
            "--out",
            "regen",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let original = std::fs::read(results.join("f1_vs_tau.csv")).unwrap();
    let regenerated = std::fs::read(dir.path().join("regen/f1_vs_tau.csv")).unwrap();
    assert_eq!(original, regenerated);
}

#[test]
fn denoise_writes_series_checkpoint_and_losses() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture_csv(dir.path(), 80);
    let out = delabel(
        &[
            "denoise", "--data", &csv, "--epochs", "40", "--l2", "2", "--lk", "6", "--out", "dn",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for artifact in ["denoised.csv", "model.dlae", "loss_history.csv"] {
        assert!(dir.path().join("dn").join(artifact).exists(), "missing {artifact}");
    }
    // The denoised CSV is itself a valid ingestible series.
    let out = delabel(&["ingest", "--data", "dn/denoised.csv"], dir.path());
    assert!(out.status.success());
}
