//! Denoising autoencoder over replicated price rows.
//!
//! The network maps the noisy input (the scaled price series replicated
//! `L` times) toward the pure input (the `L`-row moving-average stack) by
//! minimizing mean squared reconstruction error. Shape contract: `(L, n)`
//! in, `(L, n)` out. The trained output is collapsed to a single denoised
//! price series by averaging over channels and inverting the scaler.

mod checkpoint;
mod conv;
mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint, write_loss_history_csv};
pub use conv::{
    conv1d_backward, conv1d_forward, Activation, Conv1dLayer, LayerGradients, LayerKind,
};
pub use train::{train, OptimizerKind, TrainConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::ScalerParams;
use crate::matrix::Matrix;

/// Channel and kernel sizes of the default five-layer stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Architecture {
    pub encoder1: usize,
    pub encoder2: usize,
    pub kernel_size: usize,
}

impl Default for Architecture {
    fn default() -> Self {
        Architecture {
            encoder1: 16,
            encoder2: 8,
            kernel_size: 3,
        }
    }
}

/// The five-layer convolutional denoising autoencoder: two convolutions as
/// the encoder, two transposed convolutions as the decoder, and one
/// sigmoid-activated convolution as the output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoencoderModel {
    pub layers: Vec<Conv1dLayer>,
    pub seed: u64,
    pub train_config: TrainConfig,
    pub loss_history: Vec<f64>,
}

impl AutoencoderModel {
    /// Default architecture for an `channels`-row input, deterministically
    /// initialized from `seed`.
    pub fn new(channels: usize, seed: u64, train_config: TrainConfig) -> Self {
        Self::with_architecture(channels, Architecture::default(), seed, train_config)
    }

    pub fn with_architecture(
        channels: usize,
        arch: Architecture,
        seed: u64,
        train_config: TrainConfig,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = arch.kernel_size;
        let layers = vec![
            Conv1dLayer::new(
                LayerKind::Conv,
                channels,
                arch.encoder1,
                k,
                Activation::Relu,
                &mut rng,
            ),
            Conv1dLayer::new(
                LayerKind::Conv,
                arch.encoder1,
                arch.encoder2,
                k,
                Activation::Relu,
                &mut rng,
            ),
            Conv1dLayer::new(
                LayerKind::TransposedConv,
                arch.encoder2,
                arch.encoder1,
                k,
                Activation::Relu,
                &mut rng,
            ),
            Conv1dLayer::new(
                LayerKind::TransposedConv,
                arch.encoder1,
                channels,
                k,
                Activation::Relu,
                &mut rng,
            ),
            Conv1dLayer::new(
                LayerKind::Conv,
                channels,
                channels,
                k,
                Activation::Sigmoid,
                &mut rng,
            ),
        ];
        AutoencoderModel {
            layers,
            seed,
            train_config,
            loss_history: Vec::new(),
        }
    }

    /// Wrap an explicit layer stack (checkpoint loading). The stack must
    /// shape-check end to end and finish with a sigmoid.
    pub fn from_layers(layers: Vec<Conv1dLayer>, seed: u64, train_config: TrainConfig) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::EmptyInput("layer stack"));
        }
        for pair in layers.windows(2) {
            if pair[0].out_channels != pair[1].in_channels {
                return Err(Error::ShapeMismatch(format!(
                    "layer emits {} channels but the next expects {}",
                    pair[0].out_channels, pair[1].in_channels
                )));
            }
        }
        let first = layers.first().unwrap();
        let last = layers.last().unwrap();
        if first.in_channels != last.out_channels {
            return Err(Error::ShapeMismatch(format!(
                "stack maps {} channels to {}, expected a round trip",
                first.in_channels, last.out_channels
            )));
        }
        if last.activation != Activation::Sigmoid {
            return Err(Error::ShapeMismatch(
                "output layer must use the sigmoid activation".to_string(),
            ));
        }
        Ok(AutoencoderModel {
            layers,
            seed,
            train_config,
            loss_history: Vec::new(),
        })
    }

    /// Channel count the model expects on its input.
    pub fn input_channels(&self) -> usize {
        self.layers.first().map_or(0, |l| l.in_channels)
    }

    /// Full forward pass through the stack.
    pub fn forward(&self, input: &Matrix) -> Result<Matrix> {
        let mut current = input.clone();
        for layer in &self.layers {
            current = conv1d_forward(&current, layer)?;
        }
        Ok(current)
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(Conv1dLayer::parameter_count).sum()
    }

    /// SHA-256 of the checkpoint serialization; stable across save/load.
    pub fn fingerprint(&self) -> String {
        let bytes = checkpoint::to_bytes(self);
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A reconstructed price series in price units, plus provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoisedSeries {
    pub prices: Vec<f64>,
    pub model_fingerprint: String,
    /// Largest per-column standard deviation over the output channels. The
    /// collapse averages channels that are only approximately identical;
    /// this reports how approximate.
    pub channel_spread: f64,
}

/// Forward the noisy input, collapse the output channels by mean, and
/// unscale back to price units. Long inputs are processed in the same
/// overlapping windows used by training, with overlaps averaged.
pub fn reconstruct(
    model: &AutoencoderModel,
    noisy: &Matrix,
    scaler: &ScalerParams,
) -> Result<DenoisedSeries> {
    if noisy.rows() != model.input_channels() {
        return Err(Error::ShapeMismatch(format!(
            "model expects {} channels, got {}",
            model.input_channels(),
            noisy.rows()
        )));
    }
    let n = noisy.cols();
    let mut sums = vec![0.0; n];
    let mut counts = vec![0usize; n];
    let mut spread: f64 = 0.0;

    for (start, end) in train::window_ranges(n, &model.train_config) {
        let window = noisy.column_slice(start, end)?;
        let output = model.forward(&window)?;
        let rows = output.rows() as f64;
        for (local, global) in (start..end).enumerate() {
            let mut mean = 0.0;
            for r in 0..output.rows() {
                mean += output.get(r, local);
            }
            mean /= rows;
            let mut var = 0.0;
            for r in 0..output.rows() {
                let d = output.get(r, local) - mean;
                var += d * d;
            }
            spread = spread.max((var / rows).sqrt());
            sums[global] += mean;
            counts[global] += 1;
        }
    }

    let prices: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &c)| scaler.unscale(s / c as f64))
        .collect();
    Ok(DenoisedSeries {
        prices,
        model_fingerprint: model.fingerprint(),
        channel_spread: spread,
    })
}
