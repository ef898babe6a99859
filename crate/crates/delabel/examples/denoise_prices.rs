//! Reconstruct a denoised price series and compare smoothness (total
//! variation) against the original. Writes a price-overlay SVG.
//!
//! ```bash
//! cargo run --release -p delabel --example denoise_prices [-- path/to/prices.csv]
//! ```

use delabel::experiment::{line_chart, run_workflow2, ExperimentConfig, PlotSeries, PALETTE};
use delabel::market::{ingest_csv, CsvSchema};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => ingest_csv(path, &CsvSchema::default())?,
        None => sine_with_noise(500, 50.0, 200.0, 20.0, 10.0, 7),
    };

    let config = ExperimentConfig {
        tau_grid: Some(vec![0.0, 0.01]),
        ..ExperimentConfig::default()
    };
    let w2 = run_workflow2(&series, &config)?;
    let d = &w2.diagnostics;
    println!("reconstruction loss {:.6} after {} epochs", d.final_loss, d.epochs_run);
    println!("channel spread (max per-column std over channels): {:.5}", d.channel_spread);
    println!(
        "total variation: original {:.1}, denoised {:.1} -> ratio {:.3}",
        d.tv_original, d.tv_denoised, d.tv_ratio
    );

    let to_points = |prices: &[f64]| -> Vec<(f64, f64)> {
        prices.iter().enumerate().map(|(t, &p)| (t as f64, p)).collect()
    };
    let svg = line_chart(
        "Original vs denoised close price",
        "t",
        "price",
        &[
            PlotSeries {
                label: "original".to_string(),
                color: PALETTE[0].to_string(),
                points: to_points(series.prices()),
            },
            PlotSeries {
                label: "denoised".to_string(),
                color: PALETTE[1].to_string(),
                points: to_points(&w2.denoised_prices),
            },
        ],
    );
    let dir = std::env::temp_dir().join("delabel_denoise_example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("price_overlay.svg");
    std::fs::write(&path, svg).expect("write svg");
    println!("overlay written to {}", path.display());
    Ok(())
}
