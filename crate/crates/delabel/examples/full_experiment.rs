//! The complete contrastive run: naive labels versus denoised labels with
//! the same downstream SVM, plus the indicator comparison, emitted as a
//! full report directory (JSON, CSVs, SVG plots, markdown summary).
//!
//! ```bash
//! cargo run --release -p delabel --example full_experiment [-- path/to/prices.csv]
//! ```

use delabel::experiment::{emit_report, run_experiment, ExperimentConfig};
use delabel::market::{ingest_csv, CsvSchema};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => ingest_csv(path, &CsvSchema::default())?,
        None => sine_with_noise(500, 50.0, 200.0, 20.0, 10.0, 7),
    };

    let config = ExperimentConfig {
        tau_points: 9,
        seed: 7,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&series, &config)?;

    println!("  tau       W1 macro-F1   W2 macro-F1   W1 none   W2 none");
    for (w1, w2) in report.workflow1.iter().zip(&report.workflow2) {
        println!(
            "  {:<8.5}  {:<12.4}  {:<12.4}  {:<8}  {}",
            w1.tau, w1.f1.macro_f1, w2.f1.macro_f1, w1.counts.count_none, w2.counts.count_none
        );
    }
    println!(
        "\ndenoising: TV ratio {:.3}, final loss {:.6}",
        report.denoise.tv_ratio, report.denoise.final_loss
    );
    for comparison in &report.indicators {
        println!(
            "{}: {} original buys, {} denoised, {} matched",
            comparison.indicator.as_str(),
            comparison.original.len(),
            comparison.denoised.len(),
            comparison.diff.pairs.len()
        );
    }

    let outdir = std::env::temp_dir().join("delabel_full_experiment");
    let written = emit_report(&report, &outdir)?;
    println!("\n{} artifacts written to {}", written.len(), outdir.display());
    for warning in &report.warnings {
        println!("warning: {warning}");
    }
    Ok(())
}
