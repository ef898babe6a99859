//! Price-series ingestion and returns.
//!
//! A [`PriceSeries`] is the single source series: an ordered ISO-8601 time
//! index plus strictly positive close prices. Timestamps are carried for
//! reporting only; every formula downstream indexes by position. Returns come
//! in two flavours, simple and log; only log returns feed the labeling rule.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Timestamped close prices. Immutable after construction; validation
/// happens once, in [`PriceSeries::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    timestamps: Vec<String>,
    prices: Vec<f64>,
    frequency_hint: Option<String>,
}

/// Whether a return series holds simple or log returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnKind {
    Simple,
    Log,
}

/// One-step returns of a [`PriceSeries`]. `values[t]` is the return
/// realized at original index `t + 1`, so the series is one shorter than
/// its source.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub values: Vec<f64>,
    pub kind: ReturnKind,
}

impl PriceSeries {
    /// Validate and build a series. Rejects fewer than 2 points, malformed
    /// or non-increasing timestamps, and non-positive or non-finite prices.
    pub fn new(timestamps: Vec<String>, prices: Vec<f64>) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} timestamps vs {} prices",
                timestamps.len(),
                prices.len()
            )));
        }
        if prices.len() < 2 {
            return Err(Error::SeriesTooShort {
                need: 2,
                got: prices.len(),
            });
        }
        for (i, &p) in prices.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::NonPositivePrice { index: i, value: p });
            }
        }
        let mut prev: Option<NaiveDateTime> = None;
        for (i, raw) in timestamps.iter().enumerate() {
            let parsed = parse_timestamp(raw).ok_or_else(|| Error::BadTimestamp {
                index: i,
                value: raw.clone(),
            })?;
            if let Some(p) = prev {
                if parsed <= p {
                    return Err(Error::NonMonotoneTimestamps { index: i });
                }
            }
            prev = Some(parsed);
        }
        Ok(PriceSeries {
            timestamps,
            prices,
            frequency_hint: None,
        })
    }

    /// Attach a free-text frequency hint such as `"daily"` or `"1min"`.
    pub fn with_frequency_hint(mut self, hint: impl Into<String>) -> Self {
        self.frequency_hint = Some(hint.into());
        self
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn frequency_hint(&self) -> Option<&str> {
        self.frequency_hint.as_deref()
    }

    /// Number of observations `n` (always at least 2).
    pub fn len(&self) -> usize {
        self.prices.len()
    }

    /// Kept for clippy symmetry with `len`; a valid series is never empty.
    pub fn is_empty(&self) -> bool {
        false
    }
}

fn parse_timestamp(raw: &str) -> Option<NaiveDateTime> {
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(dt);
        }
    }
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
}

/// Column mapping for CSV ingestion. Defaults to `date`/`close`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub date_column: String,
    pub close_column: String,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            date_column: "date".to_string(),
            close_column: "close".to_string(),
        }
    }
}

/// Ingestion result when bad rows are allowed to be skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub series: PriceSeries,
    /// Count of rows dropped because the timestamp or price failed to parse.
    pub skipped_rows: usize,
}

/// Read a close-price CSV under the given schema. Any row whose timestamp
/// or price fails to parse is a hard error; use [`ingest_csv_skipping`] to
/// drop and count such rows instead. Invariant violations (non-positive
/// prices, non-monotone timestamps) are hard errors in both modes.
pub fn ingest_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<PriceSeries> {
    ingest_inner(path.as_ref(), schema, false).map(|i| i.series)
}

/// Like [`ingest_csv`], but rows with unparseable timestamps or prices are
/// skipped and counted rather than failing the whole ingest.
pub fn ingest_csv_skipping(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Ingested> {
    ingest_inner(path.as_ref(), schema, true)
}

fn ingest_inner(path: &Path, schema: &CsvSchema, skip_bad_rows: bool) -> Result<Ingested> {
    if !path.exists() {
        return Err(Error::FileNotFound {
            path: path.to_path_buf(),
        });
    }
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let date_idx = headers
        .iter()
        .position(|h| h == schema.date_column)
        .ok_or_else(|| Error::SchemaMismatch {
            column: schema.date_column.clone(),
        })?;
    let close_idx = headers
        .iter()
        .position(|h| h == schema.close_column)
        .ok_or_else(|| Error::SchemaMismatch {
            column: schema.close_column.clone(),
        })?;

    let mut timestamps = Vec::new();
    let mut prices = Vec::new();
    let mut skipped = 0usize;
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_no + 1; // 1-based data rows, header excluded
        let raw_date = record.get(date_idx).unwrap_or("").trim().to_string();
        let raw_close = record.get(close_idx).unwrap_or("").trim().to_string();

        if parse_timestamp(&raw_date).is_none() {
            if skip_bad_rows {
                skipped += 1;
                continue;
            }
            return Err(Error::BadRow {
                row,
                field: "timestamp",
                value: raw_date,
            });
        }
        let price: f64 = match raw_close.parse() {
            Ok(p) => p,
            Err(_) => {
                if skip_bad_rows {
                    skipped += 1;
                    continue;
                }
                return Err(Error::BadRow {
                    row,
                    field: "price",
                    value: raw_close,
                });
            }
        };
        // A NaN literal parses as f64; treat it as a bad row, not a value.
        if price.is_nan() {
            if skip_bad_rows {
                skipped += 1;
                continue;
            }
            return Err(Error::BadRow {
                row,
                field: "price",
                value: raw_close,
            });
        }
        timestamps.push(raw_date);
        prices.push(price);
    }
    let series = PriceSeries::new(timestamps, prices)?;
    Ok(Ingested {
        series,
        skipped_rows: skipped,
    })
}

/// Re-emit a series in the same CSV layout it is ingested from. Prices are
/// written with Rust's shortest round-trip formatting, so ingesting the
/// emitted file reproduces the series exactly.
pub fn write_csv(series: &PriceSeries, path: impl AsRef<Path>, schema: &CsvSchema) -> Result<()> {
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    writeln!(file, "{},{}", schema.date_column, schema.close_column)
        .map_err(|e| Error::io("write csv header", e))?;
    for (ts, price) in series.timestamps().iter().zip(series.prices()) {
        writeln!(file, "{ts},{price}").map_err(|e| Error::io("write csv row", e))?;
    }
    Ok(())
}

/// Simple returns: `values[t] = (x(t+1) - x(t)) / x(t)`.
pub fn simple_returns(series: &PriceSeries) -> ReturnSeries {
    let p = series.prices();
    let values = p.windows(2).map(|w| (w[1] - w[0]) / w[0]).collect();
    ReturnSeries {
        values,
        kind: ReturnKind::Simple,
    }
}

/// Log returns: `values[t] = ln x(t+1) - ln x(t)`.
pub fn log_returns(series: &PriceSeries) -> ReturnSeries {
    let p = series.prices();
    let values = p.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    ReturnSeries {
        values,
        kind: ReturnKind::Log,
    }
}
