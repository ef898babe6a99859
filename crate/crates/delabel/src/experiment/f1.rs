//! Precision/recall/F1 over the three-class label alphabet.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The fixed class order used by confusion matrices: `[-1, 0, +1]`.
pub const CLASS_ORDER: [i8; 3] = [-1, 0, 1];

fn class_slot(label: i8) -> Result<usize> {
    CLASS_ORDER
        .iter()
        .position(|&c| c == label)
        .ok_or_else(|| Error::InvalidConfig(format!("label {label} outside {{-1, 0, +1}}")))
}

/// Metrics for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassF1 {
    pub class: i8,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Per-class and aggregate F1. The macro mean runs over classes with
/// nonzero support in `actual`; zero-support classes are excluded rather
/// than counted as zero, and `degenerate` flags results where fewer than
/// two classes had support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Result {
    pub per_class: Vec<ClassF1>,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    /// Rows are actual classes, columns predicted, both in [`CLASS_ORDER`].
    pub confusion: [[usize; 3]; 3],
    pub degenerate: bool,
}

/// Score predictions against actual labels.
pub fn f1_scores(predicted: &[i8], actual: &[i8]) -> Result<F1Result> {
    if predicted.is_empty() || actual.is_empty() {
        return Err(Error::EmptyInput("label sequences"));
    }
    if predicted.len() != actual.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} predictions vs {} actuals",
            predicted.len(),
            actual.len()
        )));
    }
    let mut confusion = [[0usize; 3]; 3];
    for (&p, &a) in predicted.iter().zip(actual) {
        confusion[class_slot(a)?][class_slot(p)?] += 1;
    }

    let mut per_class = Vec::with_capacity(3);
    let mut macro_sum = 0.0;
    let mut macro_count = 0usize;
    let mut weighted_sum = 0.0;
    let mut total_support = 0usize;
    for (slot, &class) in CLASS_ORDER.iter().enumerate() {
        let tp = confusion[slot][slot];
        let actual_count: usize = confusion[slot].iter().sum();
        let predicted_count: usize = (0..3).map(|r| confusion[r][slot]).sum();
        let precision = if predicted_count > 0 {
            tp as f64 / predicted_count as f64
        } else {
            0.0
        };
        let recall = if actual_count > 0 {
            tp as f64 / actual_count as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class.push(ClassF1 {
            class,
            precision,
            recall,
            f1,
            support: actual_count,
        });
        if actual_count > 0 {
            macro_sum += f1;
            macro_count += 1;
            weighted_sum += f1 * actual_count as f64;
            total_support += actual_count;
        }
    }

    Ok(F1Result {
        per_class,
        macro_f1: if macro_count > 0 {
            macro_sum / macro_count as f64
        } else {
            0.0
        },
        weighted_f1: if total_support > 0 {
            weighted_sum / total_support as f64
        } else {
            0.0
        },
        confusion,
        degenerate: macro_count < 2,
    })
}
