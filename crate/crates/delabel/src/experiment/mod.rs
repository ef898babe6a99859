//! The contrastive experiment.
//!
//! Workflow 1 trains the SVM on naive labels computed from the original
//! prices. Workflow 2 first denoises the prices with the autoencoder
//! pretext task, then recomputes returns, labels, and features from the
//! reconstructed series and runs the same SVM protocol with bitwise
//! identical hyperparameters. Both report per-threshold F1 and class
//! counts over a shared threshold grid derived from the original returns.

mod f1;
mod plot;
mod report;

pub use f1::{f1_scores, ClassF1, F1Result, CLASS_ORDER};
pub use plot::{line_chart, PlotSeries, PALETTE};
pub use report::{emit_report, load_report};

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::autoencoder::{reconstruct, train, AutoencoderModel, TrainConfig};
use crate::error::{Error, Result};
use crate::features::{build_feature_matrices, fit_scaler, Structure};
use crate::indicators::{
    attach_timestamps, bollinger_buys, diff_signals, ma_crossover_buys, macd_buys, reprice,
    BuySignal, IndicatorKind, SignalDiff,
};
use crate::labeling::{
    class_counts, default_tau_grid, naive_label, validate_tau_grid, ClassCounts, LabelSource,
};
use crate::market::{ingest_csv, log_returns, CsvSchema, PriceSeries, ReturnSeries};
use crate::matrix::Matrix;
use crate::svm::{featurize, predict, train_svm, SampleSet, SvmConfig};

/// Whether the pretext task may see data past the chronological split.
/// `TrainSegmentOnly` is the default; `FullSeries` replicates setups that
/// denoise everything up front and is flagged as leaking in the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageMode {
    TrainSegmentOnly,
    FullSeries,
}

/// Where the price CSV lives and how to read it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DataConfig {
    pub path: PathBuf,
    pub date_column: String,
    pub close_column: String,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            path: PathBuf::new(),
            date_column: "date".to_string(),
            close_column: "close".to_string(),
        }
    }
}

impl DataConfig {
    pub fn schema(&self) -> CsvSchema {
        CsvSchema {
            date_column: self.date_column.clone(),
            close_column: self.close_column.clone(),
        }
    }
}

/// Pure-input construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub l2: usize,
    pub lk: usize,
    pub structure: Structure,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            l2: 2,
            lk: 21,
            structure: Structure::Combined,
        }
    }
}

/// Indicator parameters for the signal comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IndicatorConfig {
    pub ma_short: usize,
    pub ma_long: usize,
    pub bb_window: usize,
    pub bb_k: f64,
    pub match_window: usize,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        IndicatorConfig {
            ma_short: 10,
            ma_long: 50,
            bb_window: crate::indicators::DEFAULT_BB_WINDOW,
            bb_k: crate::indicators::DEFAULT_BB_K,
            match_window: crate::indicators::DEFAULT_MATCH_WINDOW,
        }
    }
}

/// Full experiment configuration: a declarative TOML file maps onto this
/// struct, and CLI flags override individual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub data: DataConfig,
    pub seed: u64,
    /// Explicit threshold grid; when absent the default grid is
    /// `tau_points` values linear from 0 to the 90th percentile of `|r|`.
    pub tau_grid: Option<Vec<f64>>,
    pub tau_points: usize,
    pub split_fraction: f64,
    pub features: FeatureConfig,
    pub autoencoder: TrainConfig,
    pub leakage_mode: LeakageMode,
    pub svm: SvmConfig,
    /// Log-return lookback the SVM sees per sample.
    pub svm_window: usize,
    pub indicators: IndicatorConfig,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data: DataConfig::default(),
            seed: 0,
            tau_grid: None,
            tau_points: 21,
            split_fraction: 0.8,
            features: FeatureConfig::default(),
            autoencoder: TrainConfig::default(),
            leakage_mode: LeakageMode::TrainSegmentOnly,
            svm: SvmConfig::default(),
            svm_window: 10,
            indicators: IndicatorConfig::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::FileNotFound {
                path: path.to_path_buf(),
            });
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("read {}", path.display()), e))?;
        toml::from_str(&text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "split fraction {} must lie in (0, 1)",
                self.split_fraction
            )));
        }
        if let Some(grid) = &self.tau_grid {
            validate_tau_grid(grid)?;
        } else if self.tau_points < 2 {
            return Err(Error::InvalidConfig(
                "tau_points must be at least 2".to_string(),
            ));
        }
        if self.svm_window < 1 {
            return Err(Error::InvalidConfig("svm_window must be >= 1".to_string()));
        }
        if self.features.l2 < 2 || self.features.l2 > self.features.lk {
            return Err(Error::InvalidConfig(format!(
                "feature windows l2={} lk={} must satisfy 2 <= l2 <= lk",
                self.features.l2, self.features.lk
            )));
        }
        self.autoencoder.validate()?;
        self.svm.validate()?;
        Ok(())
    }

    /// SHA-256 over the canonical JSON serialization.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// The SVM configuration actually used: the experiment seed feeds the
    /// subsampler so one seed determines the whole run.
    fn svm_config(&self) -> SvmConfig {
        SvmConfig {
            subsample_seed: self.seed,
            ..self.svm.clone()
        }
    }

    fn resolve_tau_grid(&self, returns: &ReturnSeries) -> Result<Vec<f64>> {
        match &self.tau_grid {
            Some(grid) => {
                validate_tau_grid(grid)?;
                Ok(grid.clone())
            }
            None => default_tau_grid(returns, self.tau_points),
        }
    }
}

/// Sum of absolute one-step differences; the smoothness metric used by the
/// denoising diagnostics.
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Per-threshold outcome of one workflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauOutcome {
    pub tau: f64,
    pub f1: F1Result,
    pub counts: ClassCounts,
    /// True when this threshold degenerated to single-class training data
    /// (constant classifier).
    pub svm_degenerate: bool,
}

/// Pretext-task diagnostics carried into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseDiagnostics {
    pub final_loss: f64,
    pub epochs_run: usize,
    pub channel_spread: f64,
    pub tv_original: f64,
    pub tv_denoised: f64,
    pub tv_ratio: f64,
    pub model_fingerprint: String,
}

/// Workflow 2 extras beyond the per-threshold outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Workflow2Output {
    pub outcomes: Vec<TauOutcome>,
    pub denoised_prices: Vec<f64>,
    pub diagnostics: DenoiseDiagnostics,
    /// The trained pretext model, for checkpointing.
    pub model: AutoencoderModel,
}

/// Signal comparison for one indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorComparison {
    pub indicator: IndicatorKind,
    pub original: Vec<BuySignal>,
    pub denoised: Vec<BuySignal>,
    pub diff: SignalDiff,
}

/// Echo of the input series so a stored report can regenerate every plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEcho {
    pub timestamps: Vec<String>,
    pub prices: Vec<f64>,
}

/// Everything one run produces. Fully determined by (config, data, seed);
/// serializes to JSON byte-identically across reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config_fingerprint: String,
    pub seed: u64,
    pub leakage_mode: LeakageMode,
    pub n_observations: usize,
    pub split_index: usize,
    pub tau_grid: Vec<f64>,
    pub workflow1: Vec<TauOutcome>,
    pub workflow2: Vec<TauOutcome>,
    pub denoise: DenoiseDiagnostics,
    pub denoised_prices: Vec<f64>,
    pub series: SeriesEcho,
    pub indicators: Vec<IndicatorComparison>,
    pub warnings: Vec<String>,
}

/// Chronological sample split at `floor(m * fraction)`.
fn split_samples(samples: &SampleSet, fraction: f64) -> Result<(SampleSet, SampleSet)> {
    let m = samples.len();
    let cut = (m as f64 * fraction).floor() as usize;
    if cut == 0 || cut >= m {
        return Err(Error::SeriesTooShort {
            need: samples.window + 3,
            got: m,
        });
    }
    let take = |range: std::ops::Range<usize>| -> Result<SampleSet> {
        let rows: Vec<Vec<f64>> = range
            .clone()
            .map(|i| samples.features.row(i).to_vec())
            .collect();
        Ok(SampleSet {
            features: Matrix::from_rows(&rows)?,
            targets: samples.targets[range].to_vec(),
            window: samples.window,
        })
    };
    Ok((take(0..cut)?, take(cut..m)?))
}

/// Train on the first split, evaluate F1 on the rest.
fn evaluate_tau(
    prices: &[f64],
    returns: &ReturnSeries,
    tau: f64,
    source: LabelSource,
    config: &ExperimentConfig,
) -> Result<TauOutcome> {
    let labels = naive_label(returns, tau)?.with_source(source);
    let samples = featurize(prices, &labels, config.svm_window)?;
    let (train_set, test_set) = split_samples(&samples, config.split_fraction)?;
    let model = train_svm(&train_set, &config.svm_config())?;
    let predictions = predict(&model, &test_set.features)?;
    let scores = f1_scores(&predictions, &test_set.targets)?;
    Ok(TauOutcome {
        tau,
        f1: scores,
        counts: class_counts(returns, tau)?,
        svm_degenerate: model.is_degenerate(),
    })
}

/// Workflow 1: naive labels on the original prices, SVM on windows of the
/// original log returns, scored on the chronological tail.
pub fn run_workflow1(series: &PriceSeries, config: &ExperimentConfig) -> Result<Vec<TauOutcome>> {
    config.validate()?;
    let returns = log_returns(series);
    let taus = config.resolve_tau_grid(&returns)?;
    taus.par_iter()
        .map(|&tau| evaluate_tau(series.prices(), &returns, tau, LabelSource::Original, config))
        .collect()
}

/// Workflow 2: denoise, then relabel and refeaturize from the
/// reconstruction, with the identical SVM protocol.
pub fn run_workflow2(series: &PriceSeries, config: &ExperimentConfig) -> Result<Workflow2Output> {
    config.validate()?;
    let n = series.len();
    let split_col = split_index(n, config.split_fraction);

    let scaler_range = match config.leakage_mode {
        LeakageMode::TrainSegmentOnly => 0..split_col,
        LeakageMode::FullSeries => 0..n,
    };
    let scaler = fit_scaler(series, scaler_range)?;
    let matrices = build_feature_matrices(
        series,
        config.features.l2,
        config.features.lk,
        config.features.structure,
        scaler,
    )?;

    let mut model = AutoencoderModel::new(
        matrices.pure.rows(),
        config.seed,
        config.autoencoder.clone(),
    );
    match config.leakage_mode {
        LeakageMode::TrainSegmentOnly => {
            let noisy = matrices.noisy.column_slice(0, split_col)?;
            let pure = matrices.pure.column_slice(0, split_col)?;
            train(&mut model, &noisy, &pure)?;
        }
        LeakageMode::FullSeries => {
            train(&mut model, &matrices.noisy, &matrices.pure)?;
        }
    }

    let denoised = reconstruct(&model, &matrices.noisy, &matrices.scaler)?;
    let tv_original = total_variation(series.prices());
    let tv_denoised = total_variation(&denoised.prices);
    let diagnostics = DenoiseDiagnostics {
        final_loss: model.loss_history.last().copied().unwrap_or(f64::NAN),
        epochs_run: model.loss_history.len(),
        channel_spread: denoised.channel_spread,
        tv_original,
        tv_denoised,
        tv_ratio: tv_denoised / tv_original,
        model_fingerprint: denoised.model_fingerprint.clone(),
    };

    // The threshold axis is shared with Workflow 1: same grid, derived
    // from the original returns.
    let original_returns = log_returns(series);
    let taus = config.resolve_tau_grid(&original_returns)?;
    let denoised_returns = ReturnSeries {
        values: denoised
            .prices
            .windows(2)
            .map(|w| w[1].ln() - w[0].ln())
            .collect(),
        kind: crate::market::ReturnKind::Log,
    };

    let outcomes: Result<Vec<TauOutcome>> = taus
        .par_iter()
        .map(|&tau| {
            evaluate_tau(
                &denoised.prices,
                &denoised_returns,
                tau,
                LabelSource::Denoised,
                config,
            )
        })
        .collect();

    Ok(Workflow2Output {
        outcomes: outcomes?,
        denoised_prices: denoised.prices,
        diagnostics,
        model,
    })
}

pub(crate) fn split_index(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction).floor() as usize).clamp(1, n - 1)
}

type IndicatorRunner<'a> = Box<dyn Fn(&[f64]) -> Result<Vec<BuySignal>> + 'a>;

fn indicator_comparison(
    series: &PriceSeries,
    denoised_prices: &[f64],
    config: &IndicatorConfig,
) -> Result<Vec<IndicatorComparison>> {
    let original_prices = series.prices();
    let runs: [(IndicatorKind, IndicatorRunner); 3] = [
        (
            IndicatorKind::MaCross,
            Box::new(|p| ma_crossover_buys(p, config.ma_short, config.ma_long)),
        ),
        (IndicatorKind::Macd, Box::new(macd_buys)),
        (
            IndicatorKind::Bb,
            Box::new(|p| bollinger_buys(p, config.bb_window, config.bb_k)),
        ),
    ];
    let mut out = Vec::new();
    for (kind, run) in runs {
        let mut original = run(original_prices)?;
        attach_timestamps(&mut original, series);
        let mut denoised = run(denoised_prices)?;
        attach_timestamps(&mut denoised, series);
        // Signals timed on the denoised curve execute at the market close.
        reprice(&mut denoised, original_prices);
        let diff = diff_signals(&original, &denoised, config.match_window);
        out.push(IndicatorComparison {
            indicator: kind,
            original,
            denoised,
            diff,
        });
    }
    Ok(out)
}

/// Run both workflows plus the indicator comparison and assemble the
/// report.
pub fn run_experiment(series: &PriceSeries, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let workflow1 = run_workflow1(series, config)?;
    let w2 = run_workflow2(series, config)?;
    let indicators = indicator_comparison(series, &w2.denoised_prices, &config.indicators)?;

    let returns = log_returns(series);
    let tau_grid = config.resolve_tau_grid(&returns)?;

    let mut warnings = Vec::new();
    if config.leakage_mode == LeakageMode::FullSeries {
        warnings.push(
            "leakage_mode=full_series: the pretext task and scaler saw data past the split"
                .to_string(),
        );
    }
    for (name, outcomes) in [("workflow1", &workflow1), ("workflow2", &w2.outcomes)] {
        for o in outcomes {
            if o.svm_degenerate {
                warnings.push(format!(
                    "{name} tau={}: single-class training data, constant classifier",
                    o.tau
                ));
            }
        }
    }

    Ok(ExperimentReport {
        config_fingerprint: config.fingerprint(),
        seed: config.seed,
        leakage_mode: config.leakage_mode,
        n_observations: series.len(),
        split_index: split_index(series.len(), config.split_fraction),
        tau_grid,
        workflow1,
        workflow2: w2.outcomes,
        denoise: w2.diagnostics,
        denoised_prices: w2.denoised_prices,
        series: SeriesEcho {
            timestamps: series.timestamps().to_vec(),
            prices: series.prices().to_vec(),
        },
        indicators,
        warnings,
    })
}

/// Convenience wrapper: ingest the configured CSV and run the experiment.
pub fn run_experiment_from_config(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let series = ingest_csv(&config.data.path, &config.data.schema())?;
    run_experiment(&series, config)
}
