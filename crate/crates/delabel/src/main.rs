//! Thin command-line front end over the `delabel` library.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use delabel::autoencoder::{save_checkpoint, write_loss_history_csv};
use delabel::error::Error;
use delabel::experiment::{
    emit_report, load_report, run_experiment, ExperimentConfig, LeakageMode,
};
use delabel::features::Structure;
use delabel::indicators::{
    attach_timestamps, bollinger_buys, diff_signals, diff_to_markdown, ma_crossover_buys,
    macd_buys, read_signals_csv, write_diff_csv, write_signals_csv,
};
use delabel::labeling::{class_counts_sweep, naive_label, write_labels_csv};
use delabel::market::{
    ingest_csv, ingest_csv_skipping, log_returns, simple_returns, write_csv, CsvSchema,
    PriceSeries,
};
use delabel::svm::{featurize, predict, save_svm, train_svm, Gamma, SvmConfig};

#[derive(Parser)]
#[command(name = "delabel", version, about = "Denoised labeling toolkit for financial time series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Close-price CSV path
    #[arg(long)]
    data: PathBuf,
    /// Timestamp column name
    #[arg(long, default_value = "date")]
    date_column: String,
    /// Close-price column name
    #[arg(long, default_value = "close")]
    close_column: String,
}

impl DataArgs {
    fn schema(&self) -> CsvSchema {
        CsvSchema {
            date_column: self.date_column.clone(),
            close_column: self.close_column.clone(),
        }
    }

    fn load(&self) -> delabel::Result<PriceSeries> {
        ingest_csv(&self.data, &self.schema())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a close-price CSV and print summary statistics
    Ingest {
        #[command(flatten)]
        data: DataArgs,
        /// Skip and count rows whose timestamp or price fails to parse
        #[arg(long)]
        skip_bad_rows: bool,
        /// Re-emit the validated series as CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute naive threshold labels, or class counts over a grid
    Label {
        #[command(flatten)]
        data: DataArgs,
        /// Single threshold: writes a labels CSV
        #[arg(long, conflicts_with = "tau_grid")]
        tau: Option<f64>,
        /// Comma-separated grid: writes a class-counts CSV
        #[arg(long, value_delimiter = ',')]
        tau_grid: Option<Vec<f64>>,
        #[arg(long, default_value = "labels.csv")]
        out: PathBuf,
    },
    /// Train the denoising autoencoder and write the denoised series
    Denoise {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long, value_parser = ["sma", "ema", "combined"], default_value = "combined")]
        structure: String,
        #[arg(long, default_value_t = 2)]
        l2: usize,
        #[arg(long, default_value_t = 21)]
        lk: usize,
        #[arg(long, value_parser = ["train-segment-only", "full-series"], default_value = "train-segment-only")]
        leakage_mode: String,
        #[arg(long, default_value_t = 0.8)]
        split: f64,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Train the RBF-SVM on naive labels and report held-out F1
    TrainSvm {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        /// Feature window (log returns per sample)
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Fixed kernel gamma; default is scale = 1/(d*Var)
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 0.8)]
        split: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Model output path
        #[arg(long, default_value = "svm.dlsv")]
        out: PathBuf,
    },
    /// Generate buy signals from MA crossover, MACD, and Bollinger Bands
    Indicators {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 10)]
        ma_short: usize,
        #[arg(long, default_value_t = 50)]
        ma_long: usize,
        #[arg(long, default_value_t = 20)]
        bb_window: usize,
        #[arg(long, default_value_t = 2.0)]
        bb_k: f64,
        #[arg(long, default_value = "signals.csv")]
        out: PathBuf,
    },
    /// Diff two signal CSVs (as written by `indicators`)
    DiffSignals {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        denoised: PathBuf,
        #[arg(long, default_value_t = 5)]
        match_window: usize,
        /// Output prefix; writes <prefix>.csv and <prefix>.md
        #[arg(long, default_value = "diff")]
        out: PathBuf,
    },
    /// Run the full contrastive experiment and emit the report
    Run {
        /// Declarative TOML config; flags below override its fields
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        date_column: Option<String>,
        #[arg(long)]
        close_column: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated threshold grid
        #[arg(long, value_delimiter = ',')]
        tau_grid: Option<Vec<f64>>,
        #[arg(long)]
        split: Option<f64>,
        #[arg(long, value_parser = ["train-segment-only", "full-series"])]
        leakage_mode: Option<String>,
        #[arg(long, value_parser = ["sma", "ema", "combined"])]
        structure: Option<String>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        svm_window: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate CSVs, plots, and the summary from a stored report.json
    Report {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_structure(s: &str) -> Structure {
    match s {
        "sma" => Structure::SmaOnly,
        "ema" => Structure::EmaOnly,
        _ => Structure::Combined,
    }
}

fn parse_leakage(s: &str) -> LeakageMode {
    match s {
        "full-series" => LeakageMode::FullSeries,
        _ => LeakageMode::TrainSegmentOnly,
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_)
        | Error::NegativeTau(_)
        | Error::WindowOutOfRange { .. }
        | Error::WindowOrder { .. }
        | Error::DimensionMismatch { .. }
        | Error::ShapeMismatch(_)
        | Error::EmptyInput(_) => 1,
        Error::NonFiniteLoss { .. } | Error::NonFiniteFeature { .. } => 3,
        _ => 2,
    }
}

fn run(command: Command) -> delabel::Result<()> {
    match command {
        Command::Ingest {
            data,
            skip_bad_rows,
            out,
        } => {
            let (series, skipped) = if skip_bad_rows {
                let ingested = ingest_csv_skipping(&data.data, &data.schema())?;
                (ingested.series, ingested.skipped_rows)
            } else {
                (data.load()?, 0)
            };
            let prices = series.prices();
            let returns = log_returns(&series);
            let simple = simple_returns(&series);
            println!("observations: {}", series.len());
            println!(
                "range: {} .. {}",
                series.timestamps().first().unwrap(),
                series.timestamps().last().unwrap()
            );
            let (min, max) = prices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &p| {
                (a.0.min(p), a.1.max(p))
            });
            println!("price min/max: {min} / {max}");
            println!(
                "mean log return: {}",
                returns.values.iter().sum::<f64>() / returns.values.len() as f64
            );
            println!(
                "mean simple return: {}",
                simple.values.iter().sum::<f64>() / simple.values.len() as f64
            );
            if skip_bad_rows {
                println!("skipped rows: {skipped}");
            }
            if let Some(out) = out {
                write_csv(&series, &out, &data.schema())?;
                println!("re-emitted to {}", out.display());
            }
            Ok(())
        }
        Command::Label {
            data,
            tau,
            tau_grid,
            out,
        } => {
            let series = data.load()?;
            let returns = log_returns(&series);
            match (tau, tau_grid) {
                (Some(tau), None) => {
                    let labels = naive_label(&returns, tau)?;
                    write_labels_csv(&series, &returns, &labels, &out)?;
                    println!("labels written to {}", out.display());
                }
                (None, Some(grid)) => {
                    let counts = class_counts_sweep(&returns, &grid)?;
                    let mut text = String::from("tau,count_up,count_down,count_none\n");
                    for c in counts {
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            c.tau, c.count_up, c.count_down, c.count_none
                        ));
                    }
                    std::fs::write(&out, text)
                        .map_err(|e| Error::io(format!("write {}", out.display()), e))?;
                    println!("class counts written to {}", out.display());
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "pass exactly one of --tau or --tau-grid".to_string(),
                    ))
                }
            }
            Ok(())
        }
        Command::Denoise {
            data,
            seed,
            epochs,
            learning_rate,
            structure,
            l2,
            lk,
            leakage_mode,
            split,
            out,
        } => {
            let series = data.load()?;
            let mut config = ExperimentConfig {
                seed,
                split_fraction: split,
                leakage_mode: parse_leakage(&leakage_mode),
                ..ExperimentConfig::default()
            };
            config.features.l2 = l2;
            config.features.lk = lk;
            config.features.structure = parse_structure(&structure);
            if let Some(e) = epochs {
                config.autoencoder.epochs = e;
            }
            if let Some(lr) = learning_rate {
                config.autoencoder.learning_rate = lr;
            }
            // The tau grid is irrelevant to denoising, but validate() wants
            // a sane one.
            config.tau_grid = Some(vec![0.0, 0.01]);

            let w2 = delabel::experiment::run_workflow2(&series, &config)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| Error::io(format!("create {}", out.display()), e))?;
            let denoised_series =
                PriceSeries::new(series.timestamps().to_vec(), w2.denoised_prices.clone())?;
            write_csv(&denoised_series, out.join("denoised.csv"), &data.schema())?;
            save_checkpoint(&w2.model, out.join("model.dlae"))?;
            write_loss_history_csv(&w2.model, out.join("loss_history.csv"))?;
            println!(
                "tv original {} -> denoised {} (ratio {})",
                w2.diagnostics.tv_original, w2.diagnostics.tv_denoised, w2.diagnostics.tv_ratio
            );
            println!(
                "final loss {} after {} epochs; channel spread {}",
                w2.diagnostics.final_loss, w2.diagnostics.epochs_run, w2.diagnostics.channel_spread
            );
            println!(
                "denoised.csv, model.dlae, loss_history.csv written to {}",
                out.display()
            );
            Ok(())
        }
        Command::TrainSvm {
            data,
            tau,
            window,
            c,
            gamma,
            split,
            seed,
            out,
        } => {
            let series = data.load()?;
            let returns = log_returns(&series);
            let labels = naive_label(&returns, tau)?;
            let samples = featurize(series.prices(), &labels, window)?;
            let m = samples.len();
            let cut = ((m as f64 * split).floor() as usize).clamp(1, m - 1);
            let train_rows: Vec<Vec<f64>> =
                (0..cut).map(|i| samples.features.row(i).to_vec()).collect();
            let test_rows: Vec<Vec<f64>> =
                (cut..m).map(|i| samples.features.row(i).to_vec()).collect();
            let train_set = delabel::svm::SampleSet {
                features: delabel::Matrix::from_rows(&train_rows)?,
                targets: samples.targets[..cut].to_vec(),
                window,
            };
            let config = SvmConfig {
                c,
                gamma: gamma.map_or(Gamma::Scale, Gamma::Fixed),
                subsample_seed: seed,
                ..SvmConfig::default()
            };
            let model = train_svm(&train_set, &config)?;
            let test_features = delabel::Matrix::from_rows(&test_rows)?;
            let predictions = predict(&model, &test_features)?;
            let scores =
                delabel::experiment::f1_scores(&predictions, &samples.targets[cut..])?;
            println!(
                "trained on {} samples ({} support vectors across {} pairs)",
                model.trained_on,
                model
                    .pairs
                    .iter()
                    .map(|p| p.support_vectors.rows())
                    .sum::<usize>(),
                model.pairs.len()
            );
            if model.is_degenerate() {
                println!("warning: single-class training data, constant classifier");
            }
            println!("test macro-F1: {}", scores.macro_f1);
            save_svm(&model, &out)?;
            println!("model written to {}", out.display());
            Ok(())
        }
        Command::Indicators {
            data,
            ma_short,
            ma_long,
            bb_window,
            bb_k,
            out,
        } => {
            let series = data.load()?;
            let prices = series.prices();
            let mut signals = ma_crossover_buys(prices, ma_short, ma_long)?;
            signals.extend(macd_buys(prices)?);
            signals.extend(bollinger_buys(prices, bb_window, bb_k)?);
            attach_timestamps(&mut signals, &series);
            println!("{} signals", signals.len());
            write_signals_csv(&signals, &out)?;
            println!("signals written to {}", out.display());
            Ok(())
        }
        Command::DiffSignals {
            original,
            denoised,
            match_window,
            out,
        } => {
            let original = read_signals_csv(&original)?;
            let denoised = read_signals_csv(&denoised)?;
            let diff = diff_signals(&original, &denoised, match_window);
            println!(
                "{} matched, {} unmatched original, {} unmatched denoised",
                diff.pairs.len(),
                diff.unmatched_original.len(),
                diff.unmatched_denoised.len()
            );
            let csv_path = out.with_extension("csv");
            let md_path = out.with_extension("md");
            write_diff_csv(&diff, &csv_path)?;
            std::fs::write(&md_path, diff_to_markdown(&diff, "Close Price Comparison"))
                .map_err(|e| Error::io(format!("write {}", md_path.display()), e))?;
            println!("diff written to {} and {}", csv_path.display(), md_path.display());
            Ok(())
        }
        Command::Run {
            config,
            data,
            date_column,
            close_column,
            seed,
            tau_grid,
            split,
            leakage_mode,
            structure,
            epochs,
            svm_window,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_toml_file(&path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(data) = data {
                cfg.data.path = data;
            }
            if let Some(c) = date_column {
                cfg.data.date_column = c;
            }
            if let Some(c) = close_column {
                cfg.data.close_column = c;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(grid) = tau_grid {
                cfg.tau_grid = Some(grid);
            }
            if let Some(s) = split {
                cfg.split_fraction = s;
            }
            if let Some(mode) = leakage_mode {
                cfg.leakage_mode = parse_leakage(&mode);
            }
            if let Some(s) = structure {
                cfg.features.structure = parse_structure(&s);
            }
            if let Some(e) = epochs {
                cfg.autoencoder.epochs = e;
            }
            if let Some(w) = svm_window {
                cfg.svm_window = w;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            if cfg.data.path.as_os_str().is_empty() {
                return Err(Error::InvalidConfig(
                    "no data path: set --data or [data].path in the config".to_string(),
                ));
            }
            cfg.validate()?;
            let series = ingest_csv(&cfg.data.path, &cfg.data.schema())?;
            let report = run_experiment(&series, &cfg)?;
            let written = emit_report(&report, &cfg.output_dir)?;
            let mean_w1: f64 = report.workflow1.iter().map(|o| o.f1.macro_f1).sum::<f64>()
                / report.workflow1.len() as f64;
            let mean_w2: f64 = report.workflow2.iter().map(|o| o.f1.macro_f1).sum::<f64>()
                / report.workflow2.len() as f64;
            println!("mean macro-F1: workflow1 {mean_w1}, workflow2 {mean_w2}");
            println!("tv ratio: {}", report.denoise.tv_ratio);
            for w in &report.warnings {
                println!("warning: {w}");
            }
            println!("{} files written to {}", written.len(), cfg.output_dir.display());
            Ok(())
        }
        Command::Report { report, out } => {
            let loaded = load_report(&report)?;
            let written = emit_report(&loaded, &out)?;
            println!("{} files written to {}", written.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
