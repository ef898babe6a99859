//! Naive threshold labels and class populations across a threshold grid.
//!
//! ```bash
//! cargo run -p delabel --example label_sweep
//! ```

use delabel::labeling::{class_counts_sweep, default_tau_grid, naive_label};
use delabel::market::log_returns;
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = sine_with_noise(300, 50.0, 200.0, 20.0, 10.0, 7);
    let returns = log_returns(&series);

    let labels = naive_label(&returns, 0.01)?;
    let ups = labels.labels.iter().filter(|&&l| l == 1).count();
    println!(
        "tau = 0.01: {} of {} steps labeled up, e.g. {:?}...",
        ups,
        labels.len(),
        &labels.labels[..12]
    );

    // Default grid: linear from 0 to the 90th percentile of |r|.
    let grid = default_tau_grid(&returns, 11)?;
    println!("\n  tau      up   down   none");
    for counts in class_counts_sweep(&returns, &grid)? {
        println!(
            "  {:<8.5} {:<5} {:<6} {}",
            counts.tau, counts.count_up, counts.count_down, counts.count_none
        );
    }
    println!("\nlarger thresholds absorb more steps into the no-signal class.");
    Ok(())
}
