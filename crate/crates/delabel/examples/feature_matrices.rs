//! Build the autoencoder's paired inputs: the pure moving-average stack and
//! the replicated-price noisy input, both min-max scaled.
//!
//! ```bash
//! cargo run -p delabel --example feature_matrices
//! ```

use delabel::features::{
    build_feature_matrices, fit_scaler, read_feature_matrices, write_feature_matrices,
    write_matrix_csv, Structure,
};
use delabel::synthetic::sine_with_noise;

fn main() -> delabel::Result<()> {
    let series = sine_with_noise(200, 50.0, 200.0, 20.0, 10.0, 7);

    // Scaler statistics come from the training segment only.
    let split = (series.len() as f64 * 0.8) as usize;
    let scaler = fit_scaler(&series, 0..split)?;
    println!(
        "scaler fit on 0..{split}: min {:.2}, max {:.2}",
        scaler.min(),
        scaler.max()
    );

    let matrices = build_feature_matrices(&series, 2, 21, Structure::Combined, scaler)?;
    let (rows, cols) = matrices.pure.shape();
    println!("pure input D: {rows} x {cols} (SMA rows then EMA rows, windows 2..=21)");
    println!("noisy input:  {} identical rows of the scaled prices", matrices.noisy.rows());
    println!(
        "first spec rows: {:?} {:?} ... {:?}",
        matrices.specs[0],
        matrices.specs[1],
        matrices.specs.last().unwrap()
    );

    let dir = std::env::temp_dir().join("delabel_features_example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let binary = dir.join("features.bin");
    write_feature_matrices(&matrices, &binary)?;
    let back = read_feature_matrices(&binary)?;
    assert_eq!(back, matrices);
    write_matrix_csv(&matrices.pure, Some(&matrices.specs), dir.join("pure.csv"))?;
    println!("exported to {} (binary round-trips exactly) and pure.csv", binary.display());
    Ok(())
}
