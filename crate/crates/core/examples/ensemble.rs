//! Train ERS, EGS and ELS ensembles of WkNNIR and compare held-out AUPR on
//! one new-drug split.
//!
//!     cargo run --release --example ensemble

use wknnir::eval::folds::{generate_folds, CvPlan};
use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{
    aupr, train_ensemble, EnsembleConfig, KnnParams, Predictor, SamplingStrategy, Setting,
    WkNNIRModel,
};

fn main() -> wknnir::Result<()> {
    let ds = generate(&SyntheticConfig {
        n_drugs: 60,
        n_targets: 40,
        seed: 11,
        ..Default::default()
    })?;
    let fold = generate_folds(&ds, &CvPlan::new(Setting::S2).with_repetitions(1))?.remove(0);
    let train = fold.training(&ds)?;
    let (drugs, targets) = fold.test_queries(&ds)?;
    let labels: Vec<bool> = fold.test_labels(&ds).iter().map(|&y| y == 1).collect();
    let params = KnnParams::new(5, 0.8)?;

    let score = |m: &dyn Predictor| -> wknnir::Result<f64> {
        let s: Vec<f64> = m.predict_grid(&drugs, &targets)?.iter().copied().collect();
        aupr(&s, &labels)
    };

    let base = WkNNIRModel::fit(train.clone(), params)?;
    println!("WkNNIR      AUPR {:.4}", score(&base)?);
    for (name, strategy) in [
        ("ERS", SamplingStrategy::uniform()),
        ("EGS", SamplingStrategy::global(0.1)),
        ("ELS", SamplingStrategy::local(0.1, 5)),
    ] {
        let cfg = EnsembleConfig {
            seed: 3,
            ..EnsembleConfig::new(strategy)
        };
        let ens = train_ensemble(train.clone(), |sub| WkNNIRModel::fit(sub, params), &cfg)?;
        println!(
            "{name}-WkNNIR  AUPR {:.4}  ({} members)",
            score(&ens)?,
            ens.members().len()
        );
    }
    Ok(())
}
