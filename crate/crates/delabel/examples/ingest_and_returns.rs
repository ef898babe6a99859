//! Read a close-price CSV, validate it, and compute simple and log returns.
//!
//! Pass a CSV path (`date,close` header) to use your own data; without one
//! the example writes and reads back a synthetic series.
//!
//! ```bash
//! cargo run -p delabel --example ingest_and_returns [-- path/to/prices.csv]
//! ```

use delabel::market::{ingest_csv, log_returns, simple_returns, write_csv, CsvSchema};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let schema = CsvSchema::default();
    let path = match std::env::args().nth(1) {
        Some(path) => path.into(),
        None => {
            let dir = std::env::temp_dir().join("delabel_ingest_example");
            std::fs::create_dir_all(&dir).expect("temp dir");
            let path = dir.join("prices.csv");
            let series = sine_with_noise(120, 25.0, 200.0, 20.0, 8.0, 3);
            write_csv(&series, &path, &schema)?;
            println!("no CSV given; wrote a synthetic one to {}", path.display());
            path
        }
    };

    let series = ingest_csv(&path, &schema)?;
    println!(
        "{} observations from {} to {}",
        series.len(),
        series.timestamps().first().unwrap(),
        series.timestamps().last().unwrap()
    );

    let log = log_returns(&series);
    let simple = simple_returns(&series);
    println!("first five log returns:    {:?}", &log.values[..5.min(log.values.len())]);
    println!("first five simple returns: {:?}", &simple.values[..5.min(simple.values.len())]);

    let total: f64 = log.values.iter().sum();
    let direct = (series.prices().last().unwrap() / series.prices().first().unwrap()).ln();
    println!("log returns telescope: sum {total:.6} vs ln(last/first) {direct:.6}");
    Ok(())
}
