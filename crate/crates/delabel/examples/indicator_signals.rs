//! Generate buy signals from the three indicators on one series.
//!
//! ```bash
//! cargo run -p delabel --example indicator_signals [-- path/to/prices.csv]
//! ```

use delabel::indicators::{attach_timestamps, bollinger_buys, ma_crossover_buys, macd_buys};
use delabel::market::{ingest_csv, CsvSchema};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => ingest_csv(path, &CsvSchema::default())?,
        None => sine_with_noise(300, 50.0, 200.0, 20.0, 10.0, 7),
    };
    let prices = series.prices();

    let mut signals = ma_crossover_buys(prices, 10, 50)?;
    signals.extend(macd_buys(prices)?);
    signals.extend(bollinger_buys(prices, 20, 2.0)?);
    attach_timestamps(&mut signals, &series);
    signals.sort_by_key(|s| s.index);

    println!("  indicator  index  date         price");
    for s in &signals {
        println!(
            "  {:<9}  {:<5}  {:<11}  {:.2}",
            s.indicator.as_str(),
            s.index,
            s.timestamp.as_deref().unwrap_or("-"),
            s.price
        );
    }
    println!("\n{} buy signals total; none fire before a full warm-up window.", signals.len());
    Ok(())
}
