//! Train the denoising autoencoder: noisy replicated prices in, moving
//! average stack as the reconstruction target.
//!
//! ```bash
//! cargo run --release -p delabel --example train_autoencoder
//! ```

use delabel::autoencoder::{
    save_checkpoint, train, write_loss_history_csv, AutoencoderModel, TrainConfig,
};
use delabel::features::{build_feature_matrices, fit_scaler, Structure};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = sine_with_noise(400, 50.0, 200.0, 20.0, 10.0, 7);
    let scaler = fit_scaler(&series, 0..series.len())?;
    let matrices = build_feature_matrices(&series, 2, 21, Structure::Combined, scaler)?;

    let config = TrainConfig {
        epochs: 300,
        ..TrainConfig::default()
    };
    let mut model = AutoencoderModel::new(matrices.pure.rows(), 7, config);
    println!(
        "training a {}-parameter stack on a {}x{} instance",
        model.parameter_count(),
        matrices.pure.rows(),
        matrices.pure.cols()
    );
    train(&mut model, &matrices.noisy, &matrices.pure)?;

    for epoch in [0usize, 10, 50, 100, 200] {
        if let Some(loss) = model.loss_history.get(epoch) {
            println!("epoch {epoch:>4}: loss {loss:.6}");
        }
    }
    println!(
        "final: loss {:.6} after {} epochs",
        model.loss_history.last().unwrap(),
        model.loss_history.len()
    );

    let dir = std::env::temp_dir().join("delabel_train_example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    save_checkpoint(&model, dir.join("model.dlae"))?;
    write_loss_history_csv(&model, dir.join("loss_history.csv"))?;
    println!("checkpoint and loss history written to {}", dir.display());
    println!("model fingerprint: {}", model.fingerprint());
    Ok(())
}
