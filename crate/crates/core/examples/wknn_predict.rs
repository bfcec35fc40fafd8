//! Score a held-out drug against every training target with WkNN.
//!
//!     cargo run --example wknn_predict

use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{fit_wknn, EntityQuery, PairQuery, Predictor, Side};

fn main() -> wknnir::Result<()> {
    let full = generate(&SyntheticConfig::default())?;
    // hold out drug 0
    let train: Vec<usize> = (1..full.n_drugs()).collect();
    let targets: Vec<usize> = (0..full.n_targets()).collect();
    let model = fit_wknn(full.subset(&train, &targets)?, 5, 0.8)?;

    let profile = full.drug_sim().profile(0, &train);
    let drug = EntityQuery::profile(profile, Side::Drug)?;
    let queries: Vec<EntityQuery> = (0..full.n_targets()).map(EntityQuery::Index).collect();
    let scores = model.predict_grid(std::slice::from_ref(&drug), &queries)?;

    println!("target  score  known");
    for j in 0..full.n_targets() {
        println!(
            "{:>6}  {:.3}  {}",
            full.target_ids()[j],
            scores[(0, j)],
            full.interactions().get(0, j)
        );
    }
    let single = model.predict(&PairQuery::new(drug, EntityQuery::Index(0)))?;
    assert_eq!(single, scores[(0, 0)]);
    Ok(())
}
