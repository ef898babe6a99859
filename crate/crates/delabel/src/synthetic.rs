//! Deterministic synthetic series for examples and tests.

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::market::PriceSeries;
use crate::matrix::Matrix;

fn daily_timestamps(n: usize) -> Vec<String> {
    let start = NaiveDate::from_ymd_opt(2017, 1, 1).unwrap();
    (0..n)
        .map(|i| {
            start
                .checked_add_days(Days::new(i as u64))
                .unwrap()
                .format("%Y-%m-%d")
                .to_string()
        })
        .collect()
}

/// Standard normal draw via Box-Muller, so the only dependency is the
/// seeded uniform generator.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Sine of the given period plus Gaussian noise, offset so prices stay
/// positive: `base + amplitude * sin(2*pi*t/period) + sigma * z_t`.
pub fn sine_with_noise(
    n: usize,
    period: f64,
    base: f64,
    amplitude: f64,
    noise_sigma: f64,
    seed: u64,
) -> PriceSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prices: Vec<f64> = (0..n)
        .map(|t| {
            let clean = base + amplitude * (std::f64::consts::TAU * t as f64 / period).sin();
            let noisy = clean + noise_sigma * standard_normal(&mut rng);
            noisy.max(1e-6)
        })
        .collect();
    PriceSeries::new(daily_timestamps(n), prices)
        .expect("synthetic sine series is valid by construction")
        .with_frequency_hint("daily")
}

/// Noise-free sine, same parameterization as [`sine_with_noise`].
pub fn pure_sine(n: usize, period: f64, base: f64, amplitude: f64) -> PriceSeries {
    sine_with_noise(n, period, base, amplitude, 0.0, 0)
}

/// Multiplicative sawtooth: `steps_up` moves of `x * ratio` followed by one
/// move returning to the base, repeating. With zero noise the return
/// pattern is exactly periodic, which makes the next-step label a
/// deterministic function of any window covering one period.
pub fn sawtooth(n: usize, steps_up: usize, base: f64, ratio: f64) -> PriceSeries {
    assert!(steps_up >= 1 && ratio > 1.0);
    let mut prices = Vec::with_capacity(n);
    let mut price = base;
    for t in 0..n {
        prices.push(price);
        if (t + 1) % (steps_up + 1) == 0 {
            price = base;
        } else {
            price *= ratio;
        }
    }
    PriceSeries::new(daily_timestamps(n), prices)
        .expect("synthetic sawtooth series is valid by construction")
        .with_frequency_hint("daily")
}

/// Two Gaussian blobs in `dim` dimensions with means at `-offset` and
/// `+offset` on every coordinate, unit variance, labels -1 and +1.
pub fn gaussian_blobs(
    per_class: usize,
    dim: usize,
    offset: f64,
    seed: u64,
) -> (Matrix, Vec<i8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * per_class);
    let mut targets = Vec::with_capacity(2 * per_class);
    for &(center, label) in &[(-offset, -1i8), (offset, 1i8)] {
        for _ in 0..per_class {
            let row: Vec<f64> = (0..dim)
                .map(|_| center + standard_normal(&mut rng))
                .collect();
            rows.push(row);
            targets.push(label);
        }
    }
    let features = Matrix::from_rows(&rows).expect("blob rows are rectangular");
    (features, targets)
}
