//! Report emission: JSON, CSVs, SVG plots, and a markdown summary.
//!
//! Every artifact is a pure function of the report struct: stable float
//! formatting, fixed iteration order, and no timestamps, so reruns with the
//! same config and data reproduce each file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::plot::{line_chart, PlotSeries, PALETTE};
use super::{ExperimentReport, IndicatorComparison, TauOutcome};
use crate::error::{Error, Result};
use crate::indicators::{diff_to_markdown, IndicatorKind};

fn write_file(path: &Path, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(format!("write {}", path.display()), e))?;
    written.push(path.to_path_buf());
    Ok(())
}

fn f1_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(
        "tau,workflow1_macro_f1,workflow2_macro_f1,workflow1_weighted_f1,workflow2_weighted_f1,\
         workflow1_degenerate,workflow2_degenerate\n",
    );
    for (w1, w2) in report.workflow1.iter().zip(&report.workflow2) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            w1.tau,
            w1.f1.macro_f1,
            w2.f1.macro_f1,
            w1.f1.weighted_f1,
            w2.f1.weighted_f1,
            w1.f1.degenerate || w1.svm_degenerate,
            w2.f1.degenerate || w2.svm_degenerate,
        );
    }
    out
}

fn counts_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(
        "tau,workflow1_up,workflow1_down,workflow1_none,workflow2_up,workflow2_down,workflow2_none\n",
    );
    for (w1, w2) in report.workflow1.iter().zip(&report.workflow2) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            w1.tau,
            w1.counts.count_up,
            w1.counts.count_down,
            w1.counts.count_none,
            w2.counts.count_up,
            w2.counts.count_down,
            w2.counts.count_none,
        );
    }
    out
}

fn signals_csv(comparisons: &[IndicatorComparison], denoised: bool) -> String {
    let mut out = String::from("indicator,timestamp,index,price\n");
    for comparison in comparisons {
        let signals = if denoised {
            &comparison.denoised
        } else {
            &comparison.original
        };
        for s in signals {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.indicator.as_str(),
                s.timestamp.as_deref().unwrap_or(""),
                s.index,
                s.price
            );
        }
    }
    out
}

fn f1_plot(report: &ExperimentReport) -> String {
    let series = vec![
        PlotSeries {
            label: "workflow 1 (original)".to_string(),
            color: PALETTE[0].to_string(),
            points: report
                .workflow1
                .iter()
                .map(|o| (o.tau, o.f1.macro_f1))
                .collect(),
        },
        PlotSeries {
            label: "workflow 2 (denoised)".to_string(),
            color: PALETTE[1].to_string(),
            points: report
                .workflow2
                .iter()
                .map(|o| (o.tau, o.f1.macro_f1))
                .collect(),
        },
    ];
    line_chart("Macro-F1 vs threshold", "tau", "macro F1", &series)
}

fn counts_plot(report: &ExperimentReport) -> String {
    fn class_points(outcomes: &[TauOutcome], pick: fn(&TauOutcome) -> usize) -> Vec<(f64, f64)> {
        outcomes.iter().map(|o| (o.tau, pick(o) as f64)).collect()
    }
    let series = vec![
        PlotSeries {
            label: "w1 up".to_string(),
            color: PALETTE[0].to_string(),
            points: class_points(&report.workflow1, |o| o.counts.count_up),
        },
        PlotSeries {
            label: "w1 down".to_string(),
            color: PALETTE[2].to_string(),
            points: class_points(&report.workflow1, |o| o.counts.count_down),
        },
        PlotSeries {
            label: "w1 none".to_string(),
            color: PALETTE[3].to_string(),
            points: class_points(&report.workflow1, |o| o.counts.count_none),
        },
        PlotSeries {
            label: "w2 up".to_string(),
            color: PALETTE[1].to_string(),
            points: class_points(&report.workflow2, |o| o.counts.count_up),
        },
        PlotSeries {
            label: "w2 down".to_string(),
            color: PALETTE[4].to_string(),
            points: class_points(&report.workflow2, |o| o.counts.count_down),
        },
        PlotSeries {
            label: "w2 none".to_string(),
            color: PALETTE[5].to_string(),
            points: class_points(&report.workflow2, |o| o.counts.count_none),
        },
    ];
    line_chart(
        "Signals per class vs threshold",
        "tau",
        "count",
        &series,
    )
}

fn overlay_plot(report: &ExperimentReport) -> String {
    let series = vec![
        PlotSeries {
            label: "original".to_string(),
            color: PALETTE[0].to_string(),
            points: report
                .series
                .prices
                .iter()
                .enumerate()
                .map(|(t, &p)| (t as f64, p))
                .collect(),
        },
        PlotSeries {
            label: "denoised".to_string(),
            color: PALETTE[1].to_string(),
            points: report
                .denoised_prices
                .iter()
                .enumerate()
                .map(|(t, &p)| (t as f64, p))
                .collect(),
        },
    ];
    line_chart(
        "Original vs denoised close price",
        "t",
        "price",
        &series,
    )
}

fn indicator_title(kind: IndicatorKind) -> &'static str {
    match kind {
        IndicatorKind::MaCross => "Close Price Comparison via MA Crossover",
        IndicatorKind::Macd => "Close Price Comparison via MACD",
        IndicatorKind::Bb => "Close Price Comparison via BB",
    }
}

fn summary_md(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Experiment summary\n");
    let _ = writeln!(out, "- observations: {}", report.n_observations);
    let _ = writeln!(
        out,
        "- split: first {} observations train, rest test",
        report.split_index
    );
    let _ = writeln!(out, "- leakage mode: {:?}", report.leakage_mode);
    let _ = writeln!(out, "- seed: {}", report.seed);
    let _ = writeln!(out, "- config fingerprint: `{}`", report.config_fingerprint);
    let _ = writeln!(out, "- model fingerprint: `{}`\n", report.denoise.model_fingerprint);
    let _ = writeln!(out, "## Denoising\n");
    let _ = writeln!(
        out,
        "- reconstruction loss {} after {} epochs",
        report.denoise.final_loss, report.denoise.epochs_run
    );
    let _ = writeln!(
        out,
        "- total variation: original {}, denoised {} (ratio {})",
        report.denoise.tv_original, report.denoise.tv_denoised, report.denoise.tv_ratio
    );
    let _ = writeln!(out, "- channel spread: {}\n", report.denoise.channel_spread);
    let _ = writeln!(out, "## Macro-F1 by threshold\n");
    let _ = writeln!(out, "| tau | workflow 1 | workflow 2 |");
    let _ = writeln!(out, "|---|---|---|");
    for (w1, w2) in report.workflow1.iter().zip(&report.workflow2) {
        let _ = writeln!(
            out,
            "| {:.5} | {:.4} | {:.4} |",
            w1.tau, w1.f1.macro_f1, w2.f1.macro_f1
        );
    }
    let _ = writeln!(out, "\n## Buying signals\n");
    for comparison in &report.indicators {
        let _ = writeln!(
            out,
            "- {}: {} original, {} denoised, {} matched",
            comparison.indicator.as_str(),
            comparison.original.len(),
            comparison.denoised.len(),
            comparison.diff.pairs.len()
        );
    }
    if !report.warnings.is_empty() {
        let _ = writeln!(out, "\n## Warnings\n");
        for w in &report.warnings {
            let _ = writeln!(out, "- {w}");
        }
    }
    out
}

/// Write every report artifact into `outdir` and return the paths written.
pub fn emit_report(report: &ExperimentReport, outdir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let outdir = outdir.as_ref();
    fs::create_dir_all(outdir)
        .map_err(|e| Error::io(format!("create {}", outdir.display()), e))?;
    let mut written = Vec::new();

    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidConfig(format!("report serialization failed: {e}")))?;
    json.push('\n');
    write_file(&outdir.join("report.json"), &json, &mut written)?;

    write_file(&outdir.join("f1_vs_tau.csv"), &f1_csv(report), &mut written)?;
    write_file(
        &outdir.join("class_counts_vs_tau.csv"),
        &counts_csv(report),
        &mut written,
    )?;
    write_file(
        &outdir.join("signals_original.csv"),
        &signals_csv(&report.indicators, false),
        &mut written,
    )?;
    write_file(
        &outdir.join("signals_denoised.csv"),
        &signals_csv(&report.indicators, true),
        &mut written,
    )?;

    let mut diffs_md = String::new();
    for comparison in &report.indicators {
        diffs_md.push_str(&diff_to_markdown(
            &comparison.diff,
            indicator_title(comparison.indicator),
        ));
        let csv_path = outdir.join(format!("diff_{}.csv", comparison.indicator.as_str()));
        crate::indicators::write_diff_csv(&comparison.diff, &csv_path)?;
        written.push(csv_path);
    }
    write_file(&outdir.join("diffs.md"), &diffs_md, &mut written)?;

    write_file(&outdir.join("f1_vs_tau.svg"), &f1_plot(report), &mut written)?;
    write_file(
        &outdir.join("class_counts_vs_tau.svg"),
        &counts_plot(report),
        &mut written,
    )?;
    write_file(
        &outdir.join("price_overlay.svg"),
        &overlay_plot(report),
        &mut written,
    )?;
    write_file(&outdir.join("summary.md"), &summary_md(report), &mut written)?;
    Ok(written)
}

/// Load a report previously written by [`emit_report`].
pub fn load_report(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("read {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| Error::BadFormat {
        what: "report",
        detail: e.to_string(),
    })
}
