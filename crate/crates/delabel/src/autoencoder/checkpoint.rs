//! Versioned binary checkpoints.
//!
//! Layout: magic `DLAE`, format version, seed, then per layer an
//! architecture descriptor (kind, channels, kernel, stride, activation)
//! followed by the raw little-endian doubles for weights and biases.
//! Checkpoints carry parameters, not the training schedule; loading uses a
//! default [`TrainConfig`] and an empty loss history.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::conv::{Activation, Conv1dLayer, LayerKind};
use super::train::TrainConfig;
use super::AutoencoderModel;
use crate::error::{Error, Result};
use crate::features::ByteCursor;

const MAGIC: &[u8; 4] = b"DLAE";
const VERSION: u32 = 1;

pub(super) fn to_bytes(model: &AutoencoderModel) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&model.seed.to_le_bytes());
    buf.extend_from_slice(&(model.layers.len() as u32).to_le_bytes());
    for layer in &model.layers {
        buf.push(match layer.kind {
            LayerKind::Conv => 0,
            LayerKind::TransposedConv => 1,
        });
        buf.extend_from_slice(&(layer.in_channels as u32).to_le_bytes());
        buf.extend_from_slice(&(layer.out_channels as u32).to_le_bytes());
        buf.extend_from_slice(&(layer.kernel_size as u32).to_le_bytes());
        buf.extend_from_slice(&(layer.stride as u32).to_le_bytes());
        buf.push(match layer.activation {
            Activation::Relu => 0,
            Activation::Sigmoid => 1,
            Activation::Linear => 2,
        });
        for w in layer.weights() {
            buf.extend_from_slice(&w.to_le_bytes());
        }
        for b in layer.biases() {
            buf.extend_from_slice(&b.to_le_bytes());
        }
    }
    buf
}

/// Write a model checkpoint.
pub fn save_checkpoint(model: &AutoencoderModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    file.write_all(&to_bytes(model))
        .map_err(|e| Error::io("write checkpoint", e))?;
    Ok(())
}

/// Read a checkpoint written by [`save_checkpoint`].
pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<AutoencoderModel> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .map_err(|e| Error::io(format!("open {}", path.display()), e))?
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io("read checkpoint", e))?;
    let mut cursor = ByteCursor::new(&bytes, "checkpoint");
    if cursor.take(4)? != MAGIC {
        return Err(Error::BadFormat {
            what: "checkpoint",
            detail: "bad magic bytes".to_string(),
        });
    }
    let version = cursor.u32()?;
    if version != VERSION {
        return Err(Error::BadFormat {
            what: "checkpoint",
            detail: format!("unsupported version {version}"),
        });
    }
    let seed = cursor.u64()?;
    let layer_count = cursor.u32()? as usize;
    let mut layers = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let kind = match cursor.u8()? {
            0 => LayerKind::Conv,
            1 => LayerKind::TransposedConv,
            other => {
                return Err(Error::BadFormat {
                    what: "checkpoint",
                    detail: format!("unknown layer kind {other}"),
                })
            }
        };
        let in_channels = cursor.u32()? as usize;
        let out_channels = cursor.u32()? as usize;
        let kernel_size = cursor.u32()? as usize;
        let stride = cursor.u32()? as usize;
        if stride != 1 {
            return Err(Error::BadFormat {
                what: "checkpoint",
                detail: format!("unsupported stride {stride}"),
            });
        }
        let activation = match cursor.u8()? {
            0 => Activation::Relu,
            1 => Activation::Sigmoid,
            2 => Activation::Linear,
            other => {
                return Err(Error::BadFormat {
                    what: "checkpoint",
                    detail: format!("unknown activation {other}"),
                })
            }
        };
        let mut weights = Vec::with_capacity(out_channels * in_channels * kernel_size);
        for _ in 0..out_channels * in_channels * kernel_size {
            weights.push(cursor.f64()?);
        }
        let mut biases = Vec::with_capacity(out_channels);
        for _ in 0..out_channels {
            biases.push(cursor.f64()?);
        }
        layers.push(Conv1dLayer::with_parameters(
            kind,
            in_channels,
            out_channels,
            kernel_size,
            activation,
            weights,
            biases,
        )?);
    }
    AutoencoderModel::from_layers(layers, seed, TrainConfig::default())
}

/// Export the recorded per-epoch loss as `epoch,loss` CSV.
pub fn write_loss_history_csv(model: &AutoencoderModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    writeln!(file, "epoch,loss").map_err(|e| Error::io("write loss history", e))?;
    for (epoch, loss) in model.loss_history.iter().enumerate() {
        writeln!(file, "{epoch},{loss}").map_err(|e| Error::io("write loss history", e))?;
    }
    Ok(())
}
