//! Denoise a series, run the same indicator on both curves, and diff the
//! triggered buy signals side by side.
//!
//! ```bash
//! cargo run --release -p delabel --example signal_diff
//! ```

use delabel::experiment::{run_workflow2, ExperimentConfig};
use delabel::indicators::{
    attach_timestamps, diff_signals, diff_to_markdown, ma_crossover_buys, reprice,
};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = sine_with_noise(500, 50.0, 200.0, 20.0, 10.0, 7);
    let config = ExperimentConfig {
        tau_grid: Some(vec![0.0]),
        ..ExperimentConfig::default()
    };
    let w2 = run_workflow2(&series, &config)?;

    let mut original = ma_crossover_buys(series.prices(), 10, 50)?;
    attach_timestamps(&mut original, &series);
    let mut denoised = ma_crossover_buys(&w2.denoised_prices, 10, 50)?;
    attach_timestamps(&mut denoised, &series);
    // A signal timed on the denoised curve still executes at the market's
    // actual close.
    reprice(&mut denoised, series.prices());

    let diff = diff_signals(&original, &denoised, 5);
    println!(
        "{} original signals, {} denoised; {} matched within 5 positions\n",
        original.len(),
        denoised.len(),
        diff.pairs.len()
    );
    for pair in &diff.pairs {
        println!(
            "  t={:<3} {:.2} -> t={:<3} {:.2}  (delta {:+.2}, {:?})",
            pair.original.index,
            pair.original.price,
            pair.denoised.index,
            pair.denoised.price,
            pair.price_delta,
            pair.relation
        );
    }
    println!("\n{}", diff_to_markdown(&diff, "Close Price Comparison via MA Crossover"));
    Ok(())
}
