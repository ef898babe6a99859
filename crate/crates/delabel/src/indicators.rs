//! Buy-signal generation and signal diffing.
//!
//! Three indicators, buys only: MA crossover, MACD, and Bollinger Bands.
//! Every "crosses above" event is strict (at-or-below before, above after),
//! and no signal fires before every constituent statistic has a full
//! window. Unlike the feature stack's expanding-window prefix, indicators
//! are trading logic and must not act on partial statistics.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::PriceSeries;

pub const DEFAULT_BB_WINDOW: usize = 20;
pub const DEFAULT_BB_K: f64 = 2.0;
pub const DEFAULT_MATCH_WINDOW: usize = 5;

const MACD_FAST: usize = 12;
const MACD_SLOW: usize = 26;
const MACD_SIGNAL: usize = 9;

/// Indicator that produced a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorKind {
    MaCross,
    Macd,
    Bb,
}

impl IndicatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndicatorKind::MaCross => "ma_cross",
            IndicatorKind::Macd => "macd",
            IndicatorKind::Bb => "bb",
        }
    }
}

/// A triggered buying opportunity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuySignal {
    pub index: usize,
    /// Filled by [`attach_timestamps`] when a time index is available.
    pub timestamp: Option<String>,
    pub price: f64,
    pub indicator: IndicatorKind,
}

/// How a matched denoised price compares to its original counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceRelation {
    Lower,
    Equal,
    Higher,
}

/// A matched original/denoised signal pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalPair {
    pub original: BuySignal,
    pub denoised: BuySignal,
    /// `denoised.price - original.price`.
    pub price_delta: f64,
    pub relation: PriceRelation,
}

/// Greedy matching of two signal lists within an index window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalDiff {
    pub pairs: Vec<SignalPair>,
    pub unmatched_original: Vec<BuySignal>,
    pub unmatched_denoised: Vec<BuySignal>,
    pub match_window: usize,
}

/// Rolling mean with full windows only: `None` until `window` values exist.
fn rolling_mean(prices: &[f64], window: usize) -> Vec<Option<f64>> {
    let mut out = vec![None; prices.len()];
    let mut running = 0.0;
    for t in 0..prices.len() {
        running += prices[t];
        if t >= window {
            running -= prices[t - window];
        }
        if t + 1 >= window {
            out[t] = Some(running / window as f64);
        }
    }
    out
}

/// Rolling population standard deviation with full windows only.
fn rolling_std(prices: &[f64], window: usize) -> Vec<Option<f64>> {
    let mut out = vec![None; prices.len()];
    for t in window - 1..prices.len() {
        let slice = &prices[t + 1 - window..=t];
        let mean = slice.iter().sum::<f64>() / window as f64;
        let var = slice.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / window as f64;
        out[t] = Some(var.sqrt());
    }
    out
}

/// Buy when the short SMA strictly crosses above the long SMA. The first
/// index at which both windows are full is `long_window - 1`, so the first
/// possible signal is at `long_window`.
pub fn ma_crossover_buys(
    prices: &[f64],
    short_window: usize,
    long_window: usize,
) -> Result<Vec<BuySignal>> {
    if short_window >= long_window {
        return Err(Error::WindowOrder {
            short: short_window,
            long: long_window,
        });
    }
    if short_window < 2 || long_window > prices.len() {
        return Err(Error::WindowOutOfRange {
            window: long_window.max(short_window),
            max: prices.len(),
        });
    }
    let short = rolling_mean(prices, short_window);
    let long = rolling_mean(prices, long_window);
    let mut signals = Vec::new();
    for t in 1..prices.len() {
        if let (Some(s0), Some(l0), Some(s1), Some(l1)) = (short[t - 1], long[t - 1], short[t], long[t])
        {
            if s0 <= l0 && s1 > l1 {
                signals.push(BuySignal {
                    index: t,
                    timestamp: None,
                    price: prices[t],
                    indicator: IndicatorKind::MaCross,
                });
            }
        }
    }
    Ok(signals)
}

/// MACD line (EMA12 - EMA26) and its 9-period signal line, both as
/// `Option` vectors honoring the full-window warm-up: the MACD line is
/// valid from index 25, and the signal-line recursion is seeded there.
pub(crate) fn macd_lines(prices: &[f64]) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let n = prices.len();
    let ema = |window: usize| crate::features::ema_slice(prices, window);
    let fast = ema(MACD_FAST);
    let slow = ema(MACD_SLOW);
    let macd_start = MACD_SLOW - 1;
    let mut macd = vec![None; n];
    for t in macd_start..n {
        macd[t] = Some(fast[t] - slow[t]);
    }
    let mut signal = vec![None; n];
    if n > macd_start {
        let alpha = 2.0 / (MACD_SIGNAL as f64 + 1.0);
        let mut current = macd[macd_start].unwrap();
        for (t, entry) in signal.iter_mut().enumerate().skip(macd_start) {
            if t > macd_start {
                current = alpha * macd[t].unwrap() + (1.0 - alpha) * current;
            }
            if t >= macd_start + MACD_SIGNAL - 1 {
                *entry = Some(current);
            }
        }
    }
    (macd, signal)
}

/// Buy when the MACD line strictly crosses above its signal line.
pub fn macd_buys(prices: &[f64]) -> Result<Vec<BuySignal>> {
    if prices.len() <= MACD_SLOW + MACD_SIGNAL {
        return Err(Error::SeriesTooShort {
            need: MACD_SLOW + MACD_SIGNAL + 1,
            got: prices.len(),
        });
    }
    let (macd, signal) = macd_lines(prices);
    let mut signals = Vec::new();
    for t in 1..prices.len() {
        if let (Some(m0), Some(s0), Some(m1), Some(s1)) = (macd[t - 1], signal[t - 1], macd[t], signal[t])
        {
            if m0 <= s0 && m1 > s1 {
                signals.push(BuySignal {
                    index: t,
                    timestamp: None,
                    price: prices[t],
                    indicator: IndicatorKind::Macd,
                });
            }
        }
    }
    Ok(signals)
}

/// Buy when the price strictly crosses up through the lower Bollinger band
/// (SMA minus `k` rolling population standard deviations).
pub fn bollinger_buys(prices: &[f64], window: usize, k: f64) -> Result<Vec<BuySignal>> {
    if window < 2 || !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "bollinger needs window >= 2 and k > 0, got window {window}, k {k}"
        )));
    }
    if prices.len() <= window {
        return Err(Error::SeriesTooShort {
            need: window + 1,
            got: prices.len(),
        });
    }
    let middle = rolling_mean(prices, window);
    let std = rolling_std(prices, window);
    let lower: Vec<Option<f64>> = middle
        .iter()
        .zip(&std)
        .map(|(m, s)| match (m, s) {
            (Some(m), Some(s)) => Some(m - k * s),
            _ => None,
        })
        .collect();
    let mut signals = Vec::new();
    for t in 1..prices.len() {
        if let (Some(l0), Some(l1)) = (lower[t - 1], lower[t]) {
            if prices[t - 1] <= l0 && prices[t] > l1 {
                signals.push(BuySignal {
                    index: t,
                    timestamp: None,
                    price: prices[t],
                    indicator: IndicatorKind::Bb,
                });
            }
        }
    }
    Ok(signals)
}

/// Fill timestamps from the series the signal indices refer to.
pub fn attach_timestamps(signals: &mut [BuySignal], series: &PriceSeries) {
    for signal in signals {
        if let Some(ts) = series.timestamps().get(signal.index) {
            signal.timestamp = Some(ts.clone());
        }
    }
}

/// Rewrite signal prices to the given series (signals timed on a denoised
/// curve execute at the market's actual close).
pub fn reprice(signals: &mut [BuySignal], prices: &[f64]) {
    for signal in signals {
        if let Some(&p) = prices.get(signal.index) {
            signal.price = p;
        }
    }
}

/// Greedy nearest-index matching within `±match_window` positions. Each
/// original signal, in order, takes the closest unmatched denoised signal
/// (earlier index wins distance ties); everything else is reported
/// unmatched.
pub fn diff_signals(
    original: &[BuySignal],
    denoised: &[BuySignal],
    match_window: usize,
) -> SignalDiff {
    let mut taken = vec![false; denoised.len()];
    let mut pairs = Vec::new();
    let mut unmatched_original = Vec::new();
    for orig in original {
        let mut best: Option<(usize, usize)> = None; // (denoised idx, distance)
        for (j, cand) in denoised.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let distance = cand.index.abs_diff(orig.index);
            if distance <= match_window && best.is_none_or(|(_, d)| distance < d) {
                best = Some((j, distance));
            }
        }
        match best {
            Some((j, _)) => {
                taken[j] = true;
                let delta = denoised[j].price - orig.price;
                pairs.push(SignalPair {
                    original: orig.clone(),
                    denoised: denoised[j].clone(),
                    price_delta: delta,
                    relation: if delta < 0.0 {
                        PriceRelation::Lower
                    } else if delta > 0.0 {
                        PriceRelation::Higher
                    } else {
                        PriceRelation::Equal
                    },
                });
            }
            None => unmatched_original.push(orig.clone()),
        }
    }
    let unmatched_denoised = denoised
        .iter()
        .zip(&taken)
        .filter(|(_, &t)| !t)
        .map(|(s, _)| s.clone())
        .collect();
    SignalDiff {
        pairs,
        unmatched_original,
        unmatched_denoised,
        match_window,
    }
}

fn fmt_ts(signal: &BuySignal) -> String {
    signal
        .timestamp
        .clone()
        .unwrap_or_else(|| format!("t={}", signal.index))
}

/// Render a diff as a side-by-side markdown table, original signals on the
/// left, matched denoised signals on the right.
pub fn diff_to_markdown(diff: &SignalDiff, title: &str) -> String {
    let mut rows: Vec<(usize, Option<&BuySignal>, Option<&BuySignal>)> = Vec::new();
    for pair in &diff.pairs {
        rows.push((pair.original.index, Some(&pair.original), Some(&pair.denoised)));
    }
    for orig in &diff.unmatched_original {
        rows.push((orig.index, Some(orig), None));
    }
    for den in &diff.unmatched_denoised {
        rows.push((den.index, None, Some(den)));
    }
    rows.sort_by_key(|(idx, _, _)| *idx);

    let mut out = String::new();
    out.push_str(&format!("### {title}\n\n"));
    out.push_str("| Date | Buy with Original Signals | Date | Buy with Denoised Signals |\n");
    out.push_str("|---|---|---|---|\n");
    for (_, orig, den) in rows {
        let (od, op) = orig.map_or((String::new(), String::new()), |s| {
            (fmt_ts(s), format!("{:.2}", s.price))
        });
        let (dd, dp) = den.map_or((String::new(), String::new()), |s| {
            (fmt_ts(s), format!("{:.2}", s.price))
        });
        out.push_str(&format!("| {od} | {op} | {dd} | {dp} |\n"));
    }
    out.push('\n');
    out
}

/// Export signals as `indicator,timestamp,index,price` CSV.
pub fn write_signals_csv(signals: &[BuySignal], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    writeln!(file, "indicator,timestamp,index,price").map_err(|e| Error::io("write signals", e))?;
    for s in signals {
        writeln!(
            file,
            "{},{},{},{}",
            s.indicator.as_str(),
            s.timestamp.as_deref().unwrap_or(""),
            s.index,
            s.price
        )
        .map_err(|e| Error::io("write signals", e))?;
    }
    Ok(())
}

/// Read signals written by [`write_signals_csv`].
pub fn read_signals_csv(path: impl AsRef<Path>) -> Result<Vec<BuySignal>> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound {
            path: path.to_path_buf(),
        });
    }
    let mut reader = csv::Reader::from_path(path)?;
    let mut signals = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_no + 1;
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let indicator = match field(0).as_str() {
            "ma_cross" => IndicatorKind::MaCross,
            "macd" => IndicatorKind::Macd,
            "bb" => IndicatorKind::Bb,
            other => {
                return Err(Error::BadRow {
                    row,
                    field: "indicator",
                    value: other.to_string(),
                })
            }
        };
        let timestamp = {
            let t = field(1);
            (!t.is_empty()).then_some(t)
        };
        let index: usize = field(2).parse().map_err(|_| Error::BadRow {
            row,
            field: "index",
            value: field(2),
        })?;
        let price: f64 = field(3).parse().map_err(|_| Error::BadRow {
            row,
            field: "price",
            value: field(3),
        })?;
        signals.push(BuySignal {
            index,
            timestamp,
            price,
            indicator,
        });
    }
    Ok(signals)
}

/// Export a diff as CSV: matched pairs with deltas, then unmatched signals
/// with the other side blank.
pub fn write_diff_csv(diff: &SignalDiff, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    writeln!(
        file,
        "original_index,original_timestamp,original_price,denoised_index,denoised_timestamp,denoised_price,price_delta,relation"
    )
    .map_err(|e| Error::io("write diff", e))?;
    for p in &diff.pairs {
        writeln!(
            file,
            "{},{},{},{},{},{},{},{}",
            p.original.index,
            p.original.timestamp.as_deref().unwrap_or(""),
            p.original.price,
            p.denoised.index,
            p.denoised.timestamp.as_deref().unwrap_or(""),
            p.denoised.price,
            p.price_delta,
            match p.relation {
                PriceRelation::Lower => "lower",
                PriceRelation::Equal => "equal",
                PriceRelation::Higher => "higher",
            }
        )
        .map_err(|e| Error::io("write diff", e))?;
    }
    for s in &diff.unmatched_original {
        writeln!(
            file,
            "{},{},{},,,,,unmatched_original",
            s.index,
            s.timestamp.as_deref().unwrap_or(""),
            s.price
        )
        .map_err(|e| Error::io("write diff", e))?;
    }
    for s in &diff.unmatched_denoised {
        writeln!(
            file,
            ",,,{},{},{},,unmatched_denoised",
            s.index,
            s.timestamp.as_deref().unwrap_or(""),
            s.price
        )
        .map_err(|e| Error::io("write diff", e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn signal_at(index: usize) -> BuySignal {
        BuySignal {
            index,
            timestamp: None,
            price: 100.0 + index as f64,
            indicator: IndicatorKind::MaCross,
        }
    }

    #[test]
    fn constant_series_yields_no_signals() {
        let prices = vec![100.0; 120];
        assert!(ma_crossover_buys(&prices, 5, 15).unwrap().is_empty());
        assert!(macd_buys(&prices).unwrap().is_empty());
        assert!(bollinger_buys(&prices, DEFAULT_BB_WINDOW, DEFAULT_BB_K)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn window_order_enforced() {
        let prices = vec![100.0; 60];
        assert!(matches!(
            ma_crossover_buys(&prices, 15, 5),
            Err(Error::WindowOrder { .. })
        ));
        assert!(matches!(
            macd_buys(&prices[..30]),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            bollinger_buys(&prices[..15], 20, 2.0),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    // Brute-force cross-scan oracle: recompute both SMAs by direct
    // summation at every index and scan for strict upward crosses.
    fn oracle_ma_cross(prices: &[f64], short: usize, long: usize) -> Vec<usize> {
        let mean = |t: usize, w: usize| -> Option<f64> {
            (t + 1 >= w).then(|| prices[t + 1 - w..=t].iter().sum::<f64>() / w as f64)
        };
        let mut out = Vec::new();
        for t in 1..prices.len() {
            if let (Some(s0), Some(l0), Some(s1), Some(l1)) = (
                mean(t - 1, short),
                mean(t - 1, long),
                mean(t, short),
                mean(t, long),
            ) {
                if s0 <= l0 && s1 > l1 {
                    out.push(t);
                }
            }
        }
        out
    }

    #[test]
    fn v_shape_has_exactly_one_cross() {
        let mut prices: Vec<f64> = (0..30).map(|i| 200.0 - 2.0 * i as f64).collect();
        prices.extend((0..30).map(|i| 142.0 + 2.0 * i as f64));
        let signals = ma_crossover_buys(&prices, 5, 15).unwrap();
        let oracle = oracle_ma_cross(&prices, 5, 15);
        assert_eq!(
            signals.iter().map(|s| s.index).collect::<Vec<_>>(),
            oracle
        );
        assert_eq!(signals.len(), 1);
    }

    // Direct recomputation oracle for MACD: independent EMA recursions and
    // the same warm-up convention, written as one straight scan.
    fn oracle_macd(prices: &[f64]) -> Vec<usize> {
        let ema = |window: usize| -> Vec<f64> {
            let alpha = 2.0 / (window as f64 + 1.0);
            let mut out = vec![prices[0]];
            for &p in &prices[1..] {
                out.push(alpha * p + (1.0 - alpha) * out.last().unwrap());
            }
            out
        };
        let fast = ema(12);
        let slow = ema(26);
        let macd: Vec<f64> = fast.iter().zip(&slow).map(|(f, s)| f - s).collect();
        let start = 25usize;
        let alpha = 2.0 / 10.0;
        let mut signal_line = vec![f64::NAN; prices.len()];
        let mut current = macd[start];
        for t in start..prices.len() {
            if t > start {
                current = alpha * macd[t] + (1.0 - alpha) * current;
            }
            if t >= start + 8 {
                signal_line[t] = current;
            }
        }
        let mut out = Vec::new();
        for t in start + 9..prices.len() {
            if macd[t - 1] <= signal_line[t - 1] && macd[t] > signal_line[t] {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn macd_impulse_matches_oracle() {
        let mut prices = vec![100.0; 40];
        prices.extend(vec![110.0; 40]);
        let signals = macd_buys(&prices).unwrap();
        let oracle = oracle_macd(&prices);
        assert_eq!(signals.iter().map(|s| s.index).collect::<Vec<_>>(), oracle);
        assert!(!signals.is_empty());
        assert_eq!(signals[0].index, 40);
    }

    // Brute-force band-scan oracle.
    fn oracle_bb(prices: &[f64], window: usize, k: f64) -> Vec<usize> {
        let lower = |t: usize| -> Option<f64> {
            (t + 1 >= window).then(|| {
                let slice = &prices[t + 1 - window..=t];
                let mean = slice.iter().sum::<f64>() / window as f64;
                let var =
                    slice.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / window as f64;
                mean - k * var.sqrt()
            })
        };
        let mut out = Vec::new();
        for t in 1..prices.len() {
            if let (Some(l0), Some(l1)) = (lower(t - 1), lower(t)) {
                if prices[t - 1] <= l0 && prices[t] > l1 {
                    out.push(t);
                }
            }
        }
        out
    }

    #[test]
    fn bollinger_spike_recovery_matches_oracle() {
        let mut prices: Vec<f64> = (0..80)
            .map(|t| 100.0 + 3.0 * (t as f64 * 0.3).sin())
            .collect();
        prices[50] = 70.0; // deep negative spike, recovery at 51
        let signals = bollinger_buys(&prices, DEFAULT_BB_WINDOW, DEFAULT_BB_K).unwrap();
        let oracle = oracle_bb(&prices, DEFAULT_BB_WINDOW, DEFAULT_BB_K);
        assert_eq!(signals.iter().map(|s| s.index).collect::<Vec<_>>(), oracle);
        assert_eq!(signals.len(), 1);
        assert_eq!(signals[0].index, 51);
    }

    #[test]
    fn diff_identical_lists_all_match_with_zero_delta() {
        let signals: Vec<BuySignal> = [3usize, 10, 25].iter().map(|&i| signal_at(i)).collect();
        let diff = diff_signals(&signals, &signals, 5);
        assert_eq!(diff.pairs.len(), 3);
        assert!(diff.pairs.iter().all(|p| p.price_delta == 0.0));
        assert!(diff
            .pairs
            .iter()
            .all(|p| p.relation == PriceRelation::Equal));
        assert!(diff.unmatched_original.is_empty());
        assert!(diff.unmatched_denoised.is_empty());
    }

    #[test]
    fn diff_disjoint_lists_match_nothing() {
        let a: Vec<BuySignal> = [0usize, 10].iter().map(|&i| signal_at(i)).collect();
        let b: Vec<BuySignal> = [50usize, 80].iter().map(|&i| signal_at(i)).collect();
        let diff = diff_signals(&a, &b, 5);
        assert!(diff.pairs.is_empty());
        assert_eq!(diff.unmatched_original.len(), 2);
        assert_eq!(diff.unmatched_denoised.len(), 2);
    }

    #[test]
    fn diff_fourteen_vs_eight_pattern() {
        // 14 original signals, 8 denoised each within 5 positions of a
        // distinct original: 8 matches, 6 unmatched originals.
        let original: Vec<BuySignal> = (0..14).map(|i| signal_at(i * 20)).collect();
        let denoised: Vec<BuySignal> = (0..8).map(|i| signal_at(i * 20 + 3)).collect();
        let diff = diff_signals(&original, &denoised, 5);
        assert_eq!(diff.pairs.len(), 8);
        assert_eq!(diff.unmatched_original.len(), 6);
        assert!(diff.unmatched_denoised.is_empty());
    }

    #[test]
    fn diff_counting_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut a: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..200)).collect();
            let mut b: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..200)).collect();
            a.sort_unstable();
            a.dedup();
            b.sort_unstable();
            b.dedup();
            let original: Vec<BuySignal> = a.iter().map(|&i| signal_at(i)).collect();
            let denoised: Vec<BuySignal> = b.iter().map(|&i| signal_at(i)).collect();
            let diff = diff_signals(&original, &denoised, 5);
            assert_eq!(diff.pairs.len() + diff.unmatched_original.len(), original.len());
            assert_eq!(diff.pairs.len() + diff.unmatched_denoised.len(), denoised.len());
            for p in &diff.pairs {
                assert!(p.denoised.index.abs_diff(p.original.index) <= 5);
            }
        }
    }

    #[test]
    fn signals_invariant_under_constant_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let prices: Vec<f64> = (0..150)
                .map(|t| 100.0 + 10.0 * (t as f64 * 0.21).sin() + rng.gen_range(-2.0..2.0))
                .collect();
            let shifted: Vec<f64> = prices.iter().map(|p| p + 1000.0).collect();
            let idx = |signals: Vec<BuySignal>| -> Vec<usize> {
                signals.into_iter().map(|s| s.index).collect()
            };
            assert_eq!(
                idx(ma_crossover_buys(&prices, 5, 15).unwrap()),
                idx(ma_crossover_buys(&shifted, 5, 15).unwrap())
            );
            assert_eq!(
                idx(macd_buys(&prices).unwrap()),
                idx(macd_buys(&shifted).unwrap())
            );
            assert_eq!(
                idx(bollinger_buys(&prices, 20, 2.0).unwrap()),
                idx(bollinger_buys(&shifted, 20, 2.0).unwrap())
            );
        }
    }

    #[test]
    fn markdown_table_layout() {
        let original = vec![signal_at(10), signal_at(40)];
        let denoised = vec![signal_at(12)];
        let mut diff = diff_signals(&original, &denoised, 5);
        diff.pairs[0].original.timestamp = Some("2017-01-18".to_string());
        diff.pairs[0].denoised.timestamp = Some("2017-01-23".to_string());
        let md = diff_to_markdown(&diff, "Close Price Comparison via MA Crossover");
        assert!(md.contains("| Date | Buy with Original Signals | Date | Buy with Denoised Signals |"));
        assert!(md.contains("| 2017-01-18 | 110.00 | 2017-01-23 | 112.00 |"));
        assert!(md.contains("| t=40 | 140.00 |  |  |"));
    }
}
