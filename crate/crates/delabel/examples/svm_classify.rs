//! Featurize log-return windows, train the SMO-based RBF-SVM, and score
//! next-step label predictions on the chronological tail.
//!
//! ```bash
//! cargo run -p delabel --example svm_classify
//! ```

use delabel::experiment::f1_scores;
use delabel::labeling::naive_label;
use delabel::market::log_returns;
use delabel::matrix::Matrix;
use delabel::svm::{featurize, predict, train_svm, SampleSet, SvmConfig};
use delabel::synthetic::sawtooth;

fn main() -> delabel::Result<()> {
    // A noise-free periodic pattern: the next label is a deterministic
    // function of any window covering one period, so the SVM can be
    // perfect. Swap in your own series to see realistic scores.
    let series = sawtooth(160, 3, 100.0, 1.1);
    let returns = log_returns(&series);
    let labels = naive_label(&returns, 0.0)?;
    let samples = featurize(series.prices(), &labels, 4)?;
    println!(
        "{} samples of {} log returns each",
        samples.len(),
        samples.features.cols()
    );

    let cut = (samples.len() as f64 * 0.8) as usize;
    let rows = |range: std::ops::Range<usize>| -> Vec<Vec<f64>> {
        range.map(|i| samples.features.row(i).to_vec()).collect()
    };
    let train_set = SampleSet {
        features: Matrix::from_rows(&rows(0..cut))?,
        targets: samples.targets[..cut].to_vec(),
        window: samples.window,
    };

    let model = train_svm(&train_set, &SvmConfig::default())?;
    println!(
        "trained on {} samples; gamma resolved to {:.4}; {} support vectors",
        model.trained_on,
        model.gamma_resolved,
        model
            .pairs
            .iter()
            .map(|p| p.support_vectors.rows())
            .sum::<usize>()
    );

    let test_features = Matrix::from_rows(&rows(cut..samples.len()))?;
    let predictions = predict(&model, &test_features)?;
    let scores = f1_scores(&predictions, &samples.targets[cut..])?;
    println!("test macro-F1: {:.4}", scores.macro_f1);
    for class in &scores.per_class {
        println!(
            "  class {:>2}: precision {:.3} recall {:.3} f1 {:.3} (support {})",
            class.class, class.precision, class.recall, class.f1, class.support
        );
    }
    Ok(())
}
