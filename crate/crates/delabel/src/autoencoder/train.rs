//! Full-batch training loop for the autoencoder.
//!
//! One "batch" is the whole `(L, n)` matrix. Series longer than
//! `window_columns` are split into overlapping column windows that act as
//! the batch members; gradients are averaged over windows in a fixed order,
//! so training stays deterministic.

use serde::{Deserialize, Serialize};

use super::conv::{backward_with_pre, forward_with_pre};
use super::AutoencoderModel;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Gradient step rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

/// Training hyperparameters. Batch mode is always full-batch and the loss
/// is always mean squared error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    /// Stop after this many epochs without a new best loss. `None` trains
    /// for the full epoch budget.
    pub early_stop_patience: Option<usize>,
    /// Inputs wider than this are trained and reconstructed on overlapping
    /// column windows. `None` disables windowing.
    pub window_columns: Option<usize>,
    /// Window step; defaults to half the window.
    pub window_stride: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 500,
            learning_rate: 1e-3,
            optimizer: OptimizerKind::Adam,
            early_stop_patience: Some(50),
            window_columns: Some(2048),
            window_stride: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs < 1 {
            return Err(Error::InvalidConfig("epochs must be >= 1".to_string()));
        }
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "learning rate {} must be finite and nonnegative",
                self.learning_rate
            )));
        }
        if let (Some(w), Some(s)) = (self.window_columns, self.window_stride) {
            if s == 0 || s > w {
                return Err(Error::InvalidConfig(format!(
                    "window stride {s} must be in 1..={w}"
                )));
            }
        }
        if self.window_columns == Some(0) {
            return Err(Error::InvalidConfig("window_columns must be >= 1".to_string()));
        }
        Ok(())
    }
}

/// Column ranges covering `0..n`: one range when windowing is off or the
/// input fits, otherwise fixed-stride overlapping windows with a final
/// window flush against the end.
pub(super) fn window_ranges(n: usize, config: &TrainConfig) -> Vec<(usize, usize)> {
    match config.window_columns {
        Some(w) if n > w => {
            let stride = config.window_stride.unwrap_or_else(|| (w / 2).max(1));
            let mut ranges = Vec::new();
            let mut start = 0;
            loop {
                if start + w >= n {
                    ranges.push((n - w, n));
                    break;
                }
                ranges.push((start, start + w));
                start += stride;
            }
            ranges
        }
        _ => vec![(0, n)],
    }
}

struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// Train in place, recording per-epoch loss (evaluated before each step) in
/// `model.loss_history`. Deterministic for a fixed model, data, and config.
pub fn train(model: &mut AutoencoderModel, noisy: &Matrix, pure: &Matrix) -> Result<()> {
    model.train_config.validate()?;
    if noisy.shape() != pure.shape() {
        return Err(Error::ShapeMismatch(format!(
            "noisy input is {:?} but pure input is {:?}",
            noisy.shape(),
            pure.shape()
        )));
    }
    if noisy.rows() != model.input_channels() {
        return Err(Error::ShapeMismatch(format!(
            "model expects {} channels, got {}",
            model.input_channels(),
            noisy.rows()
        )));
    }
    if !noisy.is_finite() || !pure.is_finite() {
        return Err(Error::NonFiniteFeature {
            sample: 0,
            column: 0,
        });
    }

    let config = model.train_config.clone();
    let ranges = window_ranges(noisy.cols(), &config);
    let param_count = model.parameter_count();
    let mut adam = AdamState {
        m: vec![0.0; param_count],
        v: vec![0.0; param_count],
        step: 0,
    };

    model.loss_history.clear();
    let mut best_loss = f64::INFINITY;
    let mut best_epoch = 0usize;

    for epoch in 0..config.epochs {
        let mut weight_grads: Vec<Vec<f64>> = model
            .layers
            .iter()
            .map(|l| vec![0.0; l.weights().len()])
            .collect();
        let mut bias_grads: Vec<Vec<f64>> = model
            .layers
            .iter()
            .map(|l| vec![0.0; l.biases().len()])
            .collect();
        let mut loss = 0.0;

        for &(start, end) in &ranges {
            let input = noisy.column_slice(start, end)?;
            let target = pure.column_slice(start, end)?;

            // Forward, keeping per-layer inputs and pre-activations.
            let mut inputs = vec![input];
            let mut pres = Vec::with_capacity(model.layers.len());
            for layer in &model.layers {
                let (pre, post) = forward_with_pre(inputs.last().unwrap(), layer)?;
                pres.push(pre);
                inputs.push(post);
            }
            let output = inputs.last().unwrap();

            let count = (output.rows() * output.cols()) as f64;
            let mut upstream = Matrix::zeros(output.rows(), output.cols());
            let mut window_loss = 0.0;
            for (idx, (&o, &t)) in output.data().iter().zip(target.data()).enumerate() {
                let diff = o - t;
                window_loss += diff * diff;
                upstream.data_mut()[idx] = 2.0 * diff / count;
            }
            loss += window_loss / count;

            for (l, layer) in model.layers.iter().enumerate().rev() {
                let grads = backward_with_pre(layer, &inputs[l], &pres[l], &upstream)?;
                for (acc, g) in weight_grads[l].iter_mut().zip(&grads.weights) {
                    *acc += g;
                }
                for (acc, g) in bias_grads[l].iter_mut().zip(&grads.biases) {
                    *acc += g;
                }
                upstream = grads.input;
            }
        }

        let window_count = ranges.len() as f64;
        loss /= window_count;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        model.loss_history.push(loss);

        if loss < best_loss {
            best_loss = loss;
            best_epoch = epoch;
        }
        if let Some(patience) = config.early_stop_patience {
            if epoch - best_epoch >= patience {
                break;
            }
        }

        // One full-batch step over the window-averaged gradient.
        adam.step += 1;
        let mut offset = 0usize;
        for (l, layer) in model.layers.iter_mut().enumerate() {
            apply_step(layer.weights_mut(), &weight_grads[l], window_count, &config, &mut adam, &mut offset);
            apply_step(layer.biases_mut(), &bias_grads[l], window_count, &config, &mut adam, &mut offset);
        }
    }

    Ok(())
}

fn apply_step(
    slots: &mut [f64],
    grads: &[f64],
    window_count: f64,
    config: &TrainConfig,
    adam: &mut AdamState,
    offset: &mut usize,
) {
    for (slot, grad) in slots.iter_mut().zip(grads) {
        let g = grad / window_count;
        match config.optimizer {
            OptimizerKind::Sgd => *slot -= config.learning_rate * g,
            OptimizerKind::Adam => {
                let m = &mut adam.m[*offset];
                let v = &mut adam.v[*offset];
                *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
                *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
                let m_hat = *m / (1.0 - ADAM_BETA1.powi(adam.step as i32));
                let v_hat = *v / (1.0 - ADAM_BETA2.powi(adam.step as i32));
                *slot -= config.learning_rate * m_hat / (v_hat.sqrt() + ADAM_EPS);
            }
        }
        *offset += 1;
    }
}
