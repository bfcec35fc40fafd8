//! Sparsity, dataset-level local imbalance and the most "difficult" drugs.
//!
//!     cargo run --example imbalance_stats [-- nr]   # gold standard needs DTI_DATA_DIR

mod common;

use wknnir::imbalance::dataset_local_imbalance_with;
use wknnir::{dataset_local_imbalance, dataset_stats, entity_importance, NeighborConvention};

fn main() -> wknnir::Result<()> {
    let (name, ds) = common::dataset()?;
    let stats = dataset_stats(&ds, 5)?;
    println!(
        "{name}: n={} m={} |Y|={} sparsity={:.4}",
        stats.n, stats.m, stats.interaction_count, stats.sparsity
    );

    let (li_d, li_t) = dataset_local_imbalance(&ds, 5)?;
    let (li_d_self, li_t_self) =
        dataset_local_imbalance_with(&ds, 5, NeighborConvention::IncludeSelf)?;
    println!("LI (self excluded): drug {li_d:.3}  target {li_t:.3}");
    println!("LI (self included): drug {li_d_self:.3}  target {li_t_self:.3}");

    let (drug_imp, _) = entity_importance(&ds, 5)?;
    let mut order: Vec<usize> = (0..drug_imp.len()).collect();
    order.sort_by(|&a, &b| drug_imp[b].total_cmp(&drug_imp[a]));
    println!("highest drug importance:");
    for &i in order.iter().take(5) {
        println!("  {:>8}  {:.2}", ds.drug_ids()[i], drug_imp[i]);
    }
    Ok(())
}
