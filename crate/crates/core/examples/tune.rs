//! Grid search over (k, eta) for WkNNIR in the new-target setting.
//!
//!     cargo run --release --example tune

mod common;

use wknnir::{tune_hyperparameters, CvPlan, Method, ParamGrid, Setting};

fn main() -> wknnir::Result<()> {
    let (name, ds) = common::dataset()?;
    let plan = CvPlan::new(Setting::S3)
        .with_folds(5)
        .with_repetitions(1)
        .with_seed(2);
    let r = tune_hyperparameters(&ds, Method::Wknnir, &ParamGrid::default(), &plan)?;
    println!(
        "{name}: best k={} eta={:.1} (AUPR {:.4})",
        r.best.k,
        r.best.eta,
        r.best_aupr.unwrap_or(f64::NAN)
    );
    println!("\n  k | eta=0.1 ... 1.0");
    for chunk in r.scores.chunks(10) {
        let row: Vec<String> = chunk
            .iter()
            .map(|c| format!("{:.3}", c.mean_aupr.unwrap_or(f64::NAN)))
            .collect();
        println!("{:>3} | {}", chunk[0].params.k, row.join(" "));
    }
    Ok(())
}
