//! 1-D convolution layers with exact analytic gradients.
//!
//! Everything is stride 1 with a same-length zero-padding convention, so a
//! `(channels, n)` input always maps to a `(channels_out, n)` output. A
//! transposed convolution at stride 1 is the padded convolution with the
//! spatially flipped kernel (and the mirrored padding offset, which only
//! differs for even kernel sizes).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Pointwise nonlinearity applied after the convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Sigmoid,
    Linear,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    z
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Linear => z,
        }
    }

    /// Derivative as a function of the pre-activation value.
    #[inline]
    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => {
                let s = 1.0 / (1.0 + (-z).exp());
                s * (1.0 - s)
            }
            Activation::Linear => 1.0,
        }
    }
}

/// Convolution orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Conv,
    TransposedConv,
}

/// One convolution layer. Weights are stored `[out][in][tap]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv1dLayer {
    pub kind: LayerKind,
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel_size: usize,
    pub stride: usize,
    pub activation: Activation,
    weights: Vec<f64>,
    biases: Vec<f64>,
}

/// Gradients of one layer's forward map.
#[derive(Debug, Clone)]
pub struct LayerGradients {
    pub input: Matrix,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Conv1dLayer {
    /// Fresh layer with uniform fan-in initialization from the given seeded
    /// generator: every weight and bias drawn from
    /// `U(-1/sqrt(in*k), 1/sqrt(in*k))`.
    pub fn new(
        kind: LayerKind,
        in_channels: usize,
        out_channels: usize,
        kernel_size: usize,
        activation: Activation,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        assert!(in_channels >= 1 && out_channels >= 1 && kernel_size >= 1);
        let bound = 1.0 / ((in_channels * kernel_size) as f64).sqrt();
        let weights = (0..out_channels * in_channels * kernel_size)
            .map(|_| rng.gen_range(-bound..bound))
            .collect();
        let biases = (0..out_channels).map(|_| rng.gen_range(-bound..bound)).collect();
        Conv1dLayer {
            kind,
            in_channels,
            out_channels,
            kernel_size,
            stride: 1,
            activation,
            weights,
            biases,
        }
    }

    /// Build a layer from explicit parameters, checking dimensions and
    /// finiteness.
    pub fn with_parameters(
        kind: LayerKind,
        in_channels: usize,
        out_channels: usize,
        kernel_size: usize,
        activation: Activation,
        weights: Vec<f64>,
        biases: Vec<f64>,
    ) -> Result<Self> {
        if weights.len() != out_channels * in_channels * kernel_size {
            return Err(Error::ShapeMismatch(format!(
                "expected {} weights, got {}",
                out_channels * in_channels * kernel_size,
                weights.len()
            )));
        }
        if biases.len() != out_channels {
            return Err(Error::ShapeMismatch(format!(
                "expected {out_channels} biases, got {}",
                biases.len()
            )));
        }
        if !weights.iter().chain(&biases).all(|v| v.is_finite()) {
            return Err(Error::ShapeMismatch(
                "layer parameters must be finite".to_string(),
            ));
        }
        Ok(Conv1dLayer {
            kind,
            in_channels,
            out_channels,
            kernel_size,
            stride: 1,
            activation,
            weights,
            biases,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.len() + self.biases.len()
    }

    #[inline]
    fn weight_index(&self, out: usize, inp: usize, tap: usize) -> usize {
        (out * self.in_channels + inp) * self.kernel_size + tap
    }

    /// Left padding of the effective (orientation-resolved) kernel.
    fn left_pad(&self) -> usize {
        match self.kind {
            LayerKind::Conv => (self.kernel_size - 1) / 2,
            LayerKind::TransposedConv => self.kernel_size / 2,
        }
    }

    /// Effective tap weight: transposed layers read their kernel flipped.
    #[inline]
    fn effective_weight(&self, out: usize, inp: usize, tap: usize) -> f64 {
        let tap = match self.kind {
            LayerKind::Conv => tap,
            LayerKind::TransposedConv => self.kernel_size - 1 - tap,
        };
        self.weights[self.weight_index(out, inp, tap)]
    }

    fn check_input(&self, input: &Matrix) -> Result<()> {
        if input.rows() != self.in_channels {
            return Err(Error::ShapeMismatch(format!(
                "layer expects {} input channels, got {}",
                self.in_channels,
                input.rows()
            )));
        }
        Ok(())
    }
}

/// Same-length forward pass: cross-correlation, bias, activation.
pub fn conv1d_forward(input: &Matrix, layer: &Conv1dLayer) -> Result<Matrix> {
    forward_with_pre(input, layer).map(|(_, post)| post)
}

/// Forward pass that also returns the pre-activation map, for backprop.
pub(crate) fn forward_with_pre(input: &Matrix, layer: &Conv1dLayer) -> Result<(Matrix, Matrix)> {
    layer.check_input(input)?;
    let n = input.cols();
    let pl = layer.left_pad() as isize;
    let mut pre = Matrix::zeros(layer.out_channels, n);
    for out in 0..layer.out_channels {
        let bias = layer.biases[out];
        let pre_row = pre.row_mut(out);
        pre_row.iter_mut().for_each(|v| *v = bias);
        for inp in 0..layer.in_channels {
            let x = input.row(inp);
            for tap in 0..layer.kernel_size {
                let w = layer.effective_weight(out, inp, tap);
                if w == 0.0 {
                    continue;
                }
                let shift = tap as isize - pl;
                let lo = (-shift).max(0) as usize;
                let hi = ((n as isize - shift).min(n as isize)).max(0) as usize;
                for t in lo..hi {
                    pre_row[t] += w * x[(t as isize + shift) as usize];
                }
            }
        }
    }
    let mut post = pre.clone();
    post.data_mut()
        .iter_mut()
        .for_each(|v| *v = layer.activation.apply(*v));
    Ok((pre, post))
}

/// Exact gradients of the forward map with respect to the input, weights,
/// and biases, given the upstream gradient on the layer output.
pub fn conv1d_backward(
    layer: &Conv1dLayer,
    input: &Matrix,
    upstream: &Matrix,
) -> Result<LayerGradients> {
    let (pre, _) = forward_with_pre(input, layer)?;
    backward_with_pre(layer, input, &pre, upstream)
}

pub(crate) fn backward_with_pre(
    layer: &Conv1dLayer,
    input: &Matrix,
    pre: &Matrix,
    upstream: &Matrix,
) -> Result<LayerGradients> {
    layer.check_input(input)?;
    let n = input.cols();
    if upstream.shape() != (layer.out_channels, n) {
        return Err(Error::ShapeMismatch(format!(
            "upstream gradient is {:?}, expected {:?}",
            upstream.shape(),
            (layer.out_channels, n)
        )));
    }
    let pl = layer.left_pad() as isize;

    // delta = upstream (.) activation'(pre)
    let mut delta = Matrix::zeros(layer.out_channels, n);
    for out in 0..layer.out_channels {
        let d = delta.row_mut(out);
        let g = upstream.row(out);
        let z = pre.row(out);
        for t in 0..n {
            d[t] = g[t] * layer.activation.derivative(z[t]);
        }
    }

    let mut d_weights = vec![0.0; layer.weights.len()];
    let mut d_biases = vec![0.0; layer.biases.len()];
    let mut d_input = Matrix::zeros(layer.in_channels, n);

    for out in 0..layer.out_channels {
        let d = delta.row(out);
        d_biases[out] = d.iter().sum();
        for inp in 0..layer.in_channels {
            let x = input.row(inp);
            for tap in 0..layer.kernel_size {
                let shift = tap as isize - pl;
                let lo = (-shift).max(0) as usize;
                let hi = ((n as isize - shift).min(n as isize)).max(0) as usize;

                let mut grad = 0.0;
                for t in lo..hi {
                    grad += d[t] * x[(t as isize + shift) as usize];
                }
                let storage_tap = match layer.kind {
                    LayerKind::Conv => tap,
                    LayerKind::TransposedConv => layer.kernel_size - 1 - tap,
                };
                d_weights[layer.weight_index(out, inp, storage_tap)] += grad;

                let w = layer.effective_weight(out, inp, tap);
                if w != 0.0 {
                    let xg = d_input.row_mut(inp);
                    for t in lo..hi {
                        xg[(t as isize + shift) as usize] += w * d[t];
                    }
                }
            }
        }
    }

    Ok(LayerGradients {
        input: d_input,
        weights: d_weights,
        biases: d_biases,
    })
}
