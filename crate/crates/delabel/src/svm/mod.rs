//! RBF-kernel soft-margin SVM trained by SMO, with one-vs-one voting.
//!
//! The classifier sees sliding windows of log returns and predicts the next
//! step's label. Both experiment workflows use it with identical
//! hyperparameters; the defaults (`C = 1`, `gamma = 1/(d * Var(features))`)
//! are the common library defaults.

mod smo;

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::ByteCursor;
use crate::labeling::LabelSeries;
use crate::matrix::Matrix;

/// Kernel width: resolved per training set (`Scale`) or fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma {
    Scale,
    Fixed(f64),
}

/// SVM hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmConfig {
    pub c: f64,
    pub gamma: Gamma,
    pub kkt_tolerance: f64,
    pub max_passes: usize,
    /// Cap on training samples; larger sets are stratified-subsampled.
    pub subsample_cap: Option<usize>,
    pub subsample_seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            gamma: Gamma::Scale,
            kkt_tolerance: 1e-3,
            max_passes: 1000,
            subsample_cap: Some(20_000),
            subsample_seed: 0,
        }
    }
}

impl SvmConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.c.is_finite() || self.c <= 0.0 {
            return Err(Error::InvalidConfig(format!("C must be positive, got {}", self.c)));
        }
        if let Gamma::Fixed(g) = self.gamma {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "fixed gamma must be positive, got {g}"
                )));
            }
        }
        if !self.kkt_tolerance.is_finite() || self.kkt_tolerance <= 0.0 {
            return Err(Error::InvalidConfig(
                "KKT tolerance must be positive".to_string(),
            ));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be >= 1".to_string()));
        }
        Ok(())
    }
}

/// Featurized training or evaluation data: one row of `window` log returns
/// per sample, each targeting the label one step past the window.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub features: Matrix,
    pub targets: Vec<i8>,
    pub window: usize,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Slide a `window`-wide log-return window over the prices: sample `i`
/// holds the `window` returns ending at return index `i + window - 1` and
/// targets the label at return index `i + window`. Windows that would be
/// incomplete are dropped.
pub fn featurize(prices: &[f64], labels: &LabelSeries, window: usize) -> Result<SampleSet> {
    if window < 1 {
        return Err(Error::InvalidConfig("feature window must be >= 1".to_string()));
    }
    let n = prices.len();
    if labels.labels.len() + 1 != n {
        return Err(Error::ShapeMismatch(format!(
            "{} prices need {} labels, got {}",
            n,
            n.saturating_sub(1),
            labels.labels.len()
        )));
    }
    if n < window + 2 {
        return Err(Error::SeriesTooShort {
            need: window + 2,
            got: n,
        });
    }
    let returns: Vec<f64> = prices.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    let m = n - window - 1;
    let mut features = Matrix::zeros(m, window);
    let mut targets = Vec::with_capacity(m);
    for i in 0..m {
        for (j, &r) in returns[i..i + window].iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::NonFiniteFeature {
                    sample: i,
                    column: j,
                });
            }
            features.set(i, j, r);
        }
        targets.push(labels.labels[i + window]);
    }
    Ok(SampleSet {
        features,
        targets,
        window,
    })
}

/// Radial basis function kernel `exp(-gamma * ||u - v||^2)`.
pub fn rbf_kernel(u: &[f64], v: &[f64], gamma: f64) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(smo::rbf(u, v, gamma))
}

/// One trained binary subproblem of the one-vs-one ensemble. A positive
/// decision value votes for `class_hi`, otherwise `class_lo`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySvm {
    pub class_lo: i8,
    pub class_hi: i8,
    pub support_vectors: Matrix,
    /// `alpha_i * y_i` per support vector.
    pub coefficients: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
    pub passes: usize,
    /// Full multiplier vector over the pair's training subset, for
    /// diagnostics; empty after loading from a checkpoint.
    pub alphas: Vec<f64>,
    /// Subset row -> original sample index; empty after loading.
    pub sample_indices: Vec<usize>,
}

impl BinarySvm {
    pub fn decision_value(&self, x: &[f64], gamma: f64) -> f64 {
        let mut f = self.bias;
        for (sv, coef) in (0..self.support_vectors.rows()).map(|i| {
            (self.support_vectors.row(i), self.coefficients[i])
        }) {
            f += coef * smo::rbf(sv, x, gamma);
        }
        f
    }
}

/// One-vs-one multi-class model.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub classes: Vec<i8>,
    pub pairs: Vec<BinarySvm>,
    pub gamma_resolved: f64,
    pub feature_dim: usize,
    /// Set when training data held a single class: the model predicts this
    /// class everywhere and carries it as a warning, not an error.
    pub constant_class: Option<i8>,
    /// Samples actually trained on, after any subsampling.
    pub trained_on: usize,
}

impl SvmModel {
    pub fn is_degenerate(&self) -> bool {
        self.constant_class.is_some()
    }

    /// True when every binary subproblem reached its KKT tolerance within
    /// the pass budget.
    pub fn all_converged(&self) -> bool {
        self.pairs.iter().all(|p| p.converged)
    }
}

fn resolve_gamma(config: &SvmConfig, features: &Matrix) -> f64 {
    match config.gamma {
        Gamma::Fixed(g) => g,
        Gamma::Scale => {
            let data = features.data();
            let count = data.len() as f64;
            let mean = data.iter().sum::<f64>() / count;
            let var = data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count;
            if var > 0.0 {
                1.0 / (features.cols() as f64 * var)
            } else {
                1.0
            }
        }
    }
}

/// Stratified, seeded subsample of at most `cap` row indices, returned in
/// ascending order.
fn subsample_indices(targets: &[i8], cap: usize, seed: u64) -> Vec<usize> {
    let m = targets.len();
    if m <= cap {
        return (0..m).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class: Vec<(i8, Vec<usize>)> = Vec::new();
    for (i, &t) in targets.iter().enumerate() {
        match by_class.iter_mut().find(|(c, _)| *c == t) {
            Some((_, v)) => v.push(i),
            None => by_class.push((t, vec![i])),
        }
    }
    by_class.sort_by_key(|(c, _)| *c);
    let mut chosen = Vec::with_capacity(cap);
    for (_, mut indices) in by_class {
        let quota = ((cap as f64 * indices.len() as f64 / m as f64).floor() as usize)
            .clamp(1, indices.len());
        indices.shuffle(&mut rng);
        chosen.extend_from_slice(&indices[..quota]);
    }
    chosen.sort_unstable();
    chosen
}

/// Train the one-vs-one ensemble with SMO. Single-class data degenerates to
/// a constant classifier (flagged via [`SvmModel::constant_class`]) because
/// large thresholds legitimately produce all-zero label sets.
pub fn train_svm(samples: &SampleSet, config: &SvmConfig) -> Result<SvmModel> {
    config.validate()?;
    if samples.is_empty() {
        return Err(Error::EmptyInput("sample set"));
    }
    for i in 0..samples.features.rows() {
        if let Some(j) = samples.features.row(i).iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature {
                sample: i,
                column: j,
            });
        }
    }

    let kept: Vec<usize> = match config.subsample_cap {
        Some(cap) => subsample_indices(&samples.targets, cap, config.subsample_seed),
        None => (0..samples.len()).collect(),
    };
    let mut rows = Vec::with_capacity(kept.len());
    let mut targets = Vec::with_capacity(kept.len());
    for &i in &kept {
        rows.push(samples.features.row(i).to_vec());
        targets.push(samples.targets[i]);
    }
    let features = Matrix::from_rows(&rows)?;

    let mut classes: Vec<i8> = targets.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let gamma_resolved = resolve_gamma(config, &features);

    if classes.len() == 1 {
        return Ok(SvmModel {
            classes: classes.clone(),
            pairs: Vec::new(),
            gamma_resolved,
            feature_dim: samples.features.cols(),
            constant_class: Some(classes[0]),
            trained_on: targets.len(),
        });
    }

    let mut pairs = Vec::new();
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            let (lo, hi) = (classes[a], classes[b]);
            let mut subset_rows = Vec::new();
            let mut subset_targets = Vec::new();
            let mut subset_indices = Vec::new();
            for (row, (&t, &orig)) in targets.iter().zip(&kept).enumerate() {
                if t == lo || t == hi {
                    subset_rows.push(features.row(row).to_vec());
                    subset_targets.push(if t == hi { 1.0 } else { -1.0 });
                    subset_indices.push(orig);
                }
            }
            let subset = Matrix::from_rows(&subset_rows)?;
            let solution = smo::solve(&smo::SmoProblem {
                features: &subset,
                targets: &subset_targets,
                c: config.c,
                gamma: gamma_resolved,
                tolerance: config.kkt_tolerance,
                max_passes: config.max_passes,
            });

            let mut support_rows = Vec::new();
            let mut coefficients = Vec::new();
            for (i, &alpha) in solution.alphas.iter().enumerate() {
                if alpha > 0.0 {
                    support_rows.push(subset.row(i).to_vec());
                    coefficients.push(alpha * subset_targets[i]);
                }
            }
            pairs.push(BinarySvm {
                class_lo: lo,
                class_hi: hi,
                support_vectors: Matrix::from_rows(&support_rows)?,
                coefficients,
                bias: solution.bias,
                converged: solution.converged,
                passes: solution.passes,
                alphas: solution.alphas,
                sample_indices: subset_indices,
            });
        }
    }

    Ok(SvmModel {
        classes,
        pairs,
        gamma_resolved,
        feature_dim: samples.features.cols(),
        constant_class: None,
        trained_on: targets.len(),
    })
}

/// One-vs-one voting; ties resolve to the smallest class label.
pub fn predict(model: &SvmModel, features: &Matrix) -> Result<Vec<i8>> {
    if features.cols() != model.feature_dim {
        return Err(Error::DimensionMismatch {
            expected: model.feature_dim,
            got: features.cols(),
        });
    }
    if let Some(class) = model.constant_class {
        return Ok(vec![class; features.rows()]);
    }
    let mut out = Vec::with_capacity(features.rows());
    for r in 0..features.rows() {
        let x = features.row(r);
        let mut votes = vec![0usize; model.classes.len()];
        for pair in &model.pairs {
            let f = pair.decision_value(x, model.gamma_resolved);
            let winner = if f > 0.0 { pair.class_hi } else { pair.class_lo };
            let slot = model.classes.iter().position(|&c| c == winner).unwrap();
            votes[slot] += 1;
        }
        // Ascending class order with strict improvement: the smallest label
        // wins any tie.
        let mut best = 0usize;
        for (slot, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = slot;
            }
        }
        out.push(model.classes[best]);
    }
    Ok(out)
}

const SVM_MAGIC: &[u8; 4] = b"DLSV";
const SVM_VERSION: u32 = 1;

/// Write the model in a versioned binary layout: gamma, class list, feature
/// dimension, then per pair the classes, bias, coefficients, and support
/// vectors as little-endian doubles.
pub fn save_svm(model: &SvmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    buf.extend_from_slice(SVM_MAGIC);
    buf.extend_from_slice(&SVM_VERSION.to_le_bytes());
    buf.extend_from_slice(&model.gamma_resolved.to_le_bytes());
    buf.extend_from_slice(&(model.feature_dim as u64).to_le_bytes());
    buf.extend_from_slice(&(model.trained_on as u64).to_le_bytes());
    buf.push(model.classes.len() as u8);
    for &c in &model.classes {
        buf.push(c as u8);
    }
    match model.constant_class {
        Some(c) => {
            buf.push(1);
            buf.push(c as u8);
        }
        None => {
            buf.push(0);
            buf.push(0);
        }
    }
    buf.extend_from_slice(&(model.pairs.len() as u32).to_le_bytes());
    for pair in &model.pairs {
        buf.push(pair.class_lo as u8);
        buf.push(pair.class_hi as u8);
        buf.extend_from_slice(&pair.bias.to_le_bytes());
        buf.push(u8::from(pair.converged));
        buf.extend_from_slice(&(pair.passes as u64).to_le_bytes());
        buf.extend_from_slice(&(pair.support_vectors.rows() as u64).to_le_bytes());
        for coef in &pair.coefficients {
            buf.extend_from_slice(&coef.to_le_bytes());
        }
        for v in pair.support_vectors.data() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    file.write_all(&buf).map_err(|e| Error::io("write svm model", e))?;
    Ok(())
}

/// Read a model written by [`save_svm`]. Diagnostic fields (full alphas,
/// sample indices) are not part of the wire format and come back empty.
pub fn load_svm(path: impl AsRef<Path>) -> Result<SvmModel> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .map_err(|e| Error::io(format!("open {}", path.display()), e))?
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io("read svm model", e))?;
    let mut cursor = ByteCursor::new(&bytes, "svm model");
    if cursor.take(4)? != SVM_MAGIC {
        return Err(Error::BadFormat {
            what: "svm model",
            detail: "bad magic bytes".to_string(),
        });
    }
    let version = cursor.u32()?;
    if version != SVM_VERSION {
        return Err(Error::BadFormat {
            what: "svm model",
            detail: format!("unsupported version {version}"),
        });
    }
    let gamma_resolved = cursor.f64()?;
    let feature_dim = cursor.u64()? as usize;
    let trained_on = cursor.u64()? as usize;
    let class_count = cursor.u8()? as usize;
    let mut classes = Vec::with_capacity(class_count);
    for _ in 0..class_count {
        classes.push(cursor.u8()? as i8);
    }
    let has_constant = cursor.u8()? == 1;
    let constant_raw = cursor.u8()? as i8;
    let constant_class = has_constant.then_some(constant_raw);
    let pair_count = cursor.u32()? as usize;
    let mut pairs = Vec::with_capacity(pair_count);
    for _ in 0..pair_count {
        let class_lo = cursor.u8()? as i8;
        let class_hi = cursor.u8()? as i8;
        let bias = cursor.f64()?;
        let converged = cursor.u8()? == 1;
        let passes = cursor.u64()? as usize;
        let sv_count = cursor.u64()? as usize;
        let mut coefficients = Vec::with_capacity(sv_count);
        for _ in 0..sv_count {
            coefficients.push(cursor.f64()?);
        }
        let mut data = Vec::with_capacity(sv_count * feature_dim);
        for _ in 0..sv_count * feature_dim {
            data.push(cursor.f64()?);
        }
        pairs.push(BinarySvm {
            class_lo,
            class_hi,
            support_vectors: Matrix::from_flat(sv_count, feature_dim, data)?,
            coefficients,
            bias,
            converged,
            passes,
            alphas: Vec::new(),
            sample_indices: Vec::new(),
        });
    }
    Ok(SvmModel {
        classes,
        pairs,
        gamma_resolved,
        feature_dim,
        constant_class,
        trained_on,
    })
}

/// Export predictions as `timestamp,label` CSV rows.
pub fn write_predictions_csv(
    timestamps: &[String],
    predictions: &[i8],
    path: impl AsRef<Path>,
) -> Result<()> {
    if timestamps.len() != predictions.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} timestamps vs {} predictions",
            timestamps.len(),
            predictions.len()
        )));
    }
    let path = path.as_ref();
    let mut file =
        File::create(path).map_err(|e| Error::io(format!("create {}", path.display()), e))?;
    writeln!(file, "timestamp,label").map_err(|e| Error::io("write predictions", e))?;
    for (ts, p) in timestamps.iter().zip(predictions) {
        writeln!(file, "{ts},{p}").map_err(|e| Error::io("write predictions", e))?;
    }
    Ok(())
}
