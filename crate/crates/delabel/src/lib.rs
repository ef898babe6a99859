//! # delabel
//!
//! Denoised labeling for financial time series. The toolkit contrasts two
//! ways of producing direction labels for a close-price series:
//!
//! - **Workflow 1** thresholds the raw one-step log returns into
//!   `{-1, 0, +1}` and trains an RBF-SVM on windows of those returns.
//! - **Workflow 2** first reconstructs the price series with a small 1-D
//!   convolutional denoising autoencoder (noisy input: the price series
//!   replicated per channel; reconstruction target: a stack of moving
//!   averages), then recomputes returns, labels, and features from the
//!   reconstruction and trains the same SVM.
//!
//! Both workflows report per-threshold F1 and class counts, and three
//! trading indicators (MA crossover, MACD, Bollinger Bands) compare the
//! buy signals triggered by the original versus the denoised series.
//! Everything is deterministic given a seed, at desk scale, with no
//! external ML dependencies.
//!
//! ## Examples
//!
//! The `examples/` directory is the primary tour; each file is a runnable
//! demonstration of one capability:
//!
//! - **`ingest_and_returns`** - read a close-price CSV, validate it, and
//!   compute simple/log returns.
//! - **`label_sweep`** - naive threshold labels and class counts across a
//!   threshold grid.
//! - **`feature_matrices`** - build the pure (moving-average) and noisy
//!   (replicated-price) autoencoder inputs and export them.
//! - **`train_autoencoder`** - train the denoising autoencoder on a noisy
//!   sine and save a checkpoint plus the loss history.
//! - **`denoise_prices`** - reconstruct a denoised price series and compare
//!   total variation against the original.
//! - **`svm_classify`** - featurize, train the SMO-based SVM, and score
//!   predictions on a held-out tail.
//! - **`indicator_signals`** - generate MA-crossover/MACD/Bollinger buy
//!   signals on a synthetic series.
//! - **`signal_diff`** - diff buy signals between an original and a
//!   denoised series, markdown table included.
//! - **`full_experiment`** - the complete contrastive run, emitting the
//!   JSON report, CSVs, and SVG plots.
//!
//! ```bash
//! cargo run --release -p delabel --example full_experiment
//! cargo run --release -p delabel --example denoise_prices
//! ```
//!
//! A thin `delabel` binary exposes the same capabilities as subcommands
//! (`ingest`, `label`, `denoise`, `train-svm`, `indicators`,
//! `diff-signals`, `run`, `report`) for CSV-in/CSV-out use.

pub mod autoencoder;
pub mod error;
pub mod experiment;
pub mod features;
pub mod indicators;
pub mod labeling;
pub mod market;
pub mod matrix;
pub mod svm;
pub mod synthetic;

pub use error::{Error, Result};
pub use matrix::Matrix;
