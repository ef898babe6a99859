//! Naive fixed-horizon labeling.
//!
//! Each one-step log return `r` is mapped to a class in `{-1, 0, +1}` under
//! a threshold `tau`: `+1` when `r > tau`, `-1` when `r < -tau`, and `0`
//! when `|r| <= tau` (the boundary is inclusive). At `tau = 0` the problem
//! degenerates to binary classification except where a return is exactly
//! zero, which still satisfies `|r| <= 0` and is labeled `0`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{PriceSeries, ReturnKind, ReturnSeries};

/// Which price series a label set was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    Original,
    Denoised,
}

impl LabelSource {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelSource::Original => "original",
            LabelSource::Denoised => "denoised",
        }
    }
}

/// Per-timestep classes aligned with a [`ReturnSeries`], plus the threshold
/// that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSeries {
    pub labels: Vec<i8>,
    pub tau: f64,
    pub source: LabelSource,
}

impl LabelSeries {
    pub fn with_source(mut self, source: LabelSource) -> Self {
        self.source = source;
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Class population at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub tau: f64,
    pub count_up: usize,
    pub count_down: usize,
    pub count_none: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.count_up + self.count_down + self.count_none
    }
}

/// Label one return under the threshold case split.
#[inline]
pub fn label_return(r: f64, tau: f64) -> i8 {
    if r > tau {
        1
    } else if r < -tau {
        -1
    } else {
        0
    }
}

/// Label a whole return series. Labeling is defined on log returns; the
/// return kind is a caller obligation, not re-derived here.
pub fn naive_label(returns: &ReturnSeries, tau: f64) -> Result<LabelSeries> {
    if tau < 0.0 || !tau.is_finite() {
        return Err(Error::NegativeTau(tau));
    }
    debug_assert_eq!(returns.kind, ReturnKind::Log);
    let labels = returns.values.iter().map(|&r| label_return(r, tau)).collect();
    Ok(LabelSeries {
        labels,
        tau,
        source: LabelSource::Original,
    })
}

/// Count classes at a single threshold.
pub fn class_counts(returns: &ReturnSeries, tau: f64) -> Result<ClassCounts> {
    let series = naive_label(returns, tau)?;
    let mut counts = ClassCounts {
        tau,
        count_up: 0,
        count_down: 0,
        count_none: 0,
    };
    for &l in &series.labels {
        match l {
            1 => counts.count_up += 1,
            -1 => counts.count_down += 1,
            _ => counts.count_none += 1,
        }
    }
    Ok(counts)
}

/// Class populations across a strictly increasing, nonnegative threshold
/// grid.
pub fn class_counts_sweep(returns: &ReturnSeries, taus: &[f64]) -> Result<Vec<ClassCounts>> {
    validate_tau_grid(taus)?;
    taus.iter().map(|&tau| class_counts(returns, tau)).collect()
}

/// Reject grids that are empty, negative, or not strictly increasing.
pub fn validate_tau_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::EmptyInput("tau grid"));
    }
    for &tau in taus {
        if tau < 0.0 || !tau.is_finite() {
            return Err(Error::NegativeTau(tau));
        }
    }
    for w in taus.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidConfig(format!(
                "tau grid must be strictly increasing, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    Ok(())
}

/// Default sweep grid: `points` values linear from 0 to the 90th percentile
/// of `|r|` (nearest-rank convention). Falls back to an upper end of 1.0
/// when the returns are all zero so the grid stays strictly increasing.
pub fn default_tau_grid(returns: &ReturnSeries, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidConfig(
            "tau grid needs at least 2 points".to_string(),
        ));
    }
    if returns.values.is_empty() {
        return Err(Error::EmptyInput("returns"));
    }
    let mut magnitudes: Vec<f64> = returns.values.iter().map(|r| r.abs()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = ((0.9 * magnitudes.len() as f64).ceil() as usize)
        .clamp(1, magnitudes.len());
    let mut top = magnitudes[rank - 1];
    if top <= 0.0 {
        top = 1.0;
    }
    Ok((0..points)
        .map(|i| top * i as f64 / (points - 1) as f64)
        .collect())
}

/// Export labels as CSV rows `timestamp,return,label,tau,source`. Row `t`
/// carries the timestamp of original index `t + 1`, where the return is
/// realized.
pub fn write_labels_csv(
    series: &PriceSeries,
    returns: &ReturnSeries,
    labels: &LabelSeries,
    path: impl AsRef<Path>,
) -> Result<()> {
    if returns.values.len() != labels.labels.len() || returns.values.len() + 1 != series.len() {
        return Err(Error::ShapeMismatch(format!(
            "series of length {} with {} returns and {} labels",
            series.len(),
            returns.values.len(),
            labels.labels.len()
        )));
    }
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    writeln!(file, "timestamp,return,label,tau,source").map_err(|e| Error::io("write csv", e))?;
    for (t, (&r, &l)) in returns.values.iter().zip(&labels.labels).enumerate() {
        writeln!(
            file,
            "{},{},{},{},{}",
            series.timestamps()[t + 1],
            r,
            l,
            labels.tau,
            labels.source.as_str()
        )
        .map_err(|e| Error::io("write csv", e))?;
    }
    Ok(())
}
