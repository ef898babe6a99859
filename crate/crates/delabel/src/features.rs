//! Autoencoder input construction.
//!
//! The pure input `D` stacks moving averages of the close price over a range
//! of lookback windows; the noisy input is the (scaled) price series
//! replicated once per row of `D`. Both are `L x n` so the reconstruction
//! target and the corrupted input line up column for column.
//!
//! Moving averages use an expanding-window prefix so `D` has no missing
//! entries: position `t` of an `l`-window SMA averages whatever history is
//! available up to `t`, and the full window once `t >= l - 1`.

use std::fs::File;
use std::io::{Read, Write};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::PriceSeries;
use crate::matrix::Matrix;

/// Moving-average flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaKind {
    Sma,
    Ema,
}

/// One row of the pure input: a moving-average kind plus its lookback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingAverageSpec {
    pub kind: MaKind,
    pub window: usize,
}

/// Which moving averages make up the pure input. The combined structure is
/// the default; the single-kind variants exist for the ablation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    SmaOnly,
    EmaOnly,
    Combined,
}

impl Structure {
    /// Row count produced for windows `l2..=lk`.
    pub fn row_count(self, l2: usize, lk: usize) -> usize {
        let base = lk - l2 + 1;
        match self {
            Structure::Combined => 2 * base,
            _ => base,
        }
    }
}

/// Min-max normalization parameters, fit on a stated index range.
///
/// Values outside the fit range may scale outside `[0, 1]`; only the
/// autoencoder *target* is clamped (see [`build_pure_input`]), never the
/// noisy input, so unscaling a noisy row recovers the original prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    min: f64,
    max: f64,
    fit_range: Range<usize>,
}

impl ScalerParams {
    pub fn new(min: f64, max: f64, fit_range: Range<usize>) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || max <= min {
            return Err(Error::DegenerateScaler(max));
        }
        Ok(ScalerParams {
            min,
            max,
            fit_range,
        })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn fit_range(&self) -> Range<usize> {
        self.fit_range.clone()
    }

    #[inline]
    pub fn scale(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    #[inline]
    pub fn unscale(&self, u: f64) -> f64 {
        self.min + u * (self.max - self.min)
    }
}

/// Fit a min-max scaler on `series[fit_range]` only.
pub fn fit_scaler(series: &PriceSeries, fit_range: Range<usize>) -> Result<ScalerParams> {
    if fit_range.is_empty() || fit_range.end > series.len() {
        return Err(Error::InvalidConfig(format!(
            "scaler fit range {}..{} invalid for series of length {}",
            fit_range.start,
            fit_range.end,
            series.len()
        )));
    }
    let slice = &series.prices()[fit_range.clone()];
    let min = slice.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ScalerParams::new(min, max, fit_range)
}

/// The autoencoder's paired inputs plus the metadata needed to invert
/// normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrices {
    pub pure: Matrix,
    pub noisy: Matrix,
    pub specs: Vec<MovingAverageSpec>,
    pub scaler: ScalerParams,
}

fn check_window(window: usize, n: usize) -> Result<()> {
    if window < 2 || window > n {
        return Err(Error::WindowOutOfRange { window, max: n });
    }
    Ok(())
}

/// Simple moving average with an expanding-window prefix, so the output has
/// the same length as the input.
pub fn sma(series: &PriceSeries, window: usize) -> Result<Vec<f64>> {
    check_window(window, series.len())?;
    Ok(sma_slice(series.prices(), window))
}

pub(crate) fn sma_slice(prices: &[f64], window: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(prices.len());
    let mut running = 0.0;
    for t in 0..prices.len() {
        running += prices[t];
        if t >= window {
            running -= prices[t - window];
        }
        let width = (t + 1).min(window);
        out.push(running / width as f64);
    }
    out
}

/// Exponential moving average with smoothing `alpha = 2 / (window + 1)`,
/// seeded at the first price.
pub fn ema(series: &PriceSeries, window: usize) -> Result<Vec<f64>> {
    check_window(window, series.len())?;
    Ok(ema_slice(series.prices(), window))
}

pub(crate) fn ema_slice(prices: &[f64], window: usize) -> Vec<f64> {
    let alpha = 2.0 / (window as f64 + 1.0);
    let mut out = Vec::with_capacity(prices.len());
    let mut current = prices[0];
    out.push(current);
    for &p in &prices[1..] {
        current = alpha * p + (1.0 - alpha) * current;
        out.push(current);
    }
    out
}

/// Pure input `D` with the combined SMA+EMA structure: rows
/// `SMA_l2..SMA_lk` then `EMA_l2..EMA_lk`, every entry scaled into `[0, 1]`
/// (values outside the scaler's fit range are clamped, since `D` is the
/// sigmoid-bounded reconstruction target).
pub fn build_pure_input(
    series: &PriceSeries,
    l2: usize,
    lk: usize,
    scaler: &ScalerParams,
) -> Result<Matrix> {
    build_pure_input_with(series, l2, lk, Structure::Combined, scaler)
}

/// Pure input under an explicit row structure.
pub fn build_pure_input_with(
    series: &PriceSeries,
    l2: usize,
    lk: usize,
    structure: Structure,
    scaler: &ScalerParams,
) -> Result<Matrix> {
    if l2 > lk {
        return Err(Error::WindowOrder {
            short: lk,
            long: l2,
        });
    }
    check_window(l2, series.len())?;
    check_window(lk, series.len())?;
    let n = series.len();
    let specs = structure_specs(l2, lk, structure);
    let mut matrix = Matrix::zeros(specs.len(), n);
    for (row, spec) in specs.iter().enumerate() {
        let values = match spec.kind {
            MaKind::Sma => sma_slice(series.prices(), spec.window),
            MaKind::Ema => ema_slice(series.prices(), spec.window),
        };
        for (col, v) in values.into_iter().enumerate() {
            matrix.set(row, col, scaler.scale(v).clamp(0.0, 1.0));
        }
    }
    Ok(matrix)
}

fn structure_specs(l2: usize, lk: usize, structure: Structure) -> Vec<MovingAverageSpec> {
    let windows = l2..=lk;
    match structure {
        Structure::SmaOnly => windows
            .map(|w| MovingAverageSpec {
                kind: MaKind::Sma,
                window: w,
            })
            .collect(),
        Structure::EmaOnly => windows
            .map(|w| MovingAverageSpec {
                kind: MaKind::Ema,
                window: w,
            })
            .collect(),
        Structure::Combined => {
            let mut specs: Vec<MovingAverageSpec> = (l2..=lk)
                .map(|w| MovingAverageSpec {
                    kind: MaKind::Sma,
                    window: w,
                })
                .collect();
            specs.extend((l2..=lk).map(|w| MovingAverageSpec {
                kind: MaKind::Ema,
                window: w,
            }));
            specs
        }
    }
}

/// Noisy input: `rows` identical copies of the scaled price series. Not
/// clamped, so unscaling any row recovers the prices exactly.
pub fn build_noisy_input(series: &PriceSeries, rows: usize, scaler: &ScalerParams) -> Result<Matrix> {
    if rows == 0 {
        return Err(Error::InvalidConfig(
            "noisy input needs at least one row".to_string(),
        ));
    }
    let scaled: Vec<f64> = series.prices().iter().map(|&p| scaler.scale(p)).collect();
    let mut matrix = Matrix::zeros(rows, series.len());
    for r in 0..rows {
        matrix.row_mut(r).copy_from_slice(&scaled);
    }
    Ok(matrix)
}

/// Build the paired pure/noisy inputs with matching shapes.
pub fn build_feature_matrices(
    series: &PriceSeries,
    l2: usize,
    lk: usize,
    structure: Structure,
    scaler: ScalerParams,
) -> Result<FeatureMatrices> {
    let pure = build_pure_input_with(series, l2, lk, structure, &scaler)?;
    let noisy = build_noisy_input(series, pure.rows(), &scaler)?;
    Ok(FeatureMatrices {
        specs: structure_specs(l2, lk, structure),
        pure,
        noisy,
        scaler,
    })
}

const MATRIX_MAGIC: &[u8; 4] = b"DLFM";
const MATRIX_VERSION: u32 = 1;

/// Write the paired matrices in a flat binary layout: magic, version, `L`,
/// `n`, the spec list, the scaler, then the pure and noisy entries as
/// row-major little-endian doubles.
pub fn write_feature_matrices(matrices: &FeatureMatrices, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    buf.extend_from_slice(MATRIX_MAGIC);
    buf.extend_from_slice(&MATRIX_VERSION.to_le_bytes());
    buf.extend_from_slice(&(matrices.pure.rows() as u64).to_le_bytes());
    buf.extend_from_slice(&(matrices.pure.cols() as u64).to_le_bytes());
    buf.extend_from_slice(&(matrices.specs.len() as u64).to_le_bytes());
    for spec in &matrices.specs {
        buf.push(match spec.kind {
            MaKind::Sma => 0,
            MaKind::Ema => 1,
        });
        buf.extend_from_slice(&(spec.window as u64).to_le_bytes());
    }
    buf.extend_from_slice(&matrices.scaler.min().to_le_bytes());
    buf.extend_from_slice(&matrices.scaler.max().to_le_bytes());
    buf.extend_from_slice(&(matrices.scaler.fit_range().start as u64).to_le_bytes());
    buf.extend_from_slice(&(matrices.scaler.fit_range().end as u64).to_le_bytes());
    for v in matrices.pure.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for v in matrices.noisy.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    file.write_all(&buf)
        .map_err(|e| Error::io("write feature matrices", e))?;
    Ok(())
}

/// Read matrices written by [`write_feature_matrices`].
pub fn read_feature_matrices(path: impl AsRef<Path>) -> Result<FeatureMatrices> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .map_err(|e| Error::io(format!("open {}", path.display()), e))?
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io("read feature matrices", e))?;
    let mut cursor = ByteCursor::new(&bytes, "feature matrix");
    let magic = cursor.take(4)?;
    if magic != MATRIX_MAGIC {
        return Err(Error::BadFormat {
            what: "feature matrix",
            detail: "bad magic bytes".to_string(),
        });
    }
    let version = cursor.u32()?;
    if version != MATRIX_VERSION {
        return Err(Error::BadFormat {
            what: "feature matrix",
            detail: format!("unsupported version {version}"),
        });
    }
    let rows = cursor.u64()? as usize;
    let cols = cursor.u64()? as usize;
    let spec_count = cursor.u64()? as usize;
    let mut specs = Vec::with_capacity(spec_count);
    for _ in 0..spec_count {
        let kind = match cursor.u8()? {
            0 => MaKind::Sma,
            1 => MaKind::Ema,
            other => {
                return Err(Error::BadFormat {
                    what: "feature matrix",
                    detail: format!("unknown moving-average kind {other}"),
                })
            }
        };
        let window = cursor.u64()? as usize;
        specs.push(MovingAverageSpec { kind, window });
    }
    let min = cursor.f64()?;
    let max = cursor.f64()?;
    let start = cursor.u64()? as usize;
    let end = cursor.u64()? as usize;
    let scaler = ScalerParams::new(min, max, start..end)?;
    let mut read_matrix = |rows: usize, cols: usize| -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(cursor.f64()?);
        }
        Matrix::from_flat(rows, cols, data)
    };
    let pure = read_matrix(rows, cols)?;
    let noisy = read_matrix(rows, cols)?;
    Ok(FeatureMatrices {
        pure,
        noisy,
        specs,
        scaler,
    })
}

/// Write one matrix as CSV for inspection, one row per line with a leading
/// row label built from the spec list (or `row<i>` when no specs given).
pub fn write_matrix_csv(
    matrix: &Matrix,
    specs: Option<&[MovingAverageSpec]>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    for r in 0..matrix.rows() {
        let label = match specs.and_then(|s| s.get(r)) {
            Some(spec) => format!(
                "{}_{}",
                match spec.kind {
                    MaKind::Sma => "sma",
                    MaKind::Ema => "ema",
                },
                spec.window
            ),
            None => format!("row{r}"),
        };
        let cells: Vec<String> = matrix.row(r).iter().map(|v| v.to_string()).collect();
        writeln!(file, "{label},{}", cells.join(","))
            .map_err(|e| Error::io("write matrix csv", e))?;
    }
    Ok(())
}

pub(crate) struct ByteCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> ByteCursor<'a> {
    pub(crate) fn new(bytes: &'a [u8], what: &'static str) -> Self {
        ByteCursor {
            bytes,
            pos: 0,
            what,
        }
    }

    pub(crate) fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.bytes.len() {
            return Err(Error::BadFormat {
                what: self.what,
                detail: "truncated file".to_string(),
            });
        }
        let slice = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
