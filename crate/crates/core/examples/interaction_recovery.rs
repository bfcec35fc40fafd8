//! Recovered interaction matrices and the imbalance ratios used by WkNNIR.
//!
//!     cargo run --example interaction_recovery

use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{build_recovery, fit_wknnir, wknnir::imbalance_ratios};

fn main() -> wknnir::Result<()> {
    let ds = generate(&SyntheticConfig {
        n_drugs: 10,
        n_targets: 6,
        seed: 2,
        ..Default::default()
    })?;
    let rec = build_recovery(&ds, 3, 0.7)?;
    println!("LI drug {:.3}, target {:.3}", rec.li_drug, rec.li_target);
    let (r_d, r_t) = imbalance_ratios(rec.li_drug, rec.li_target);
    println!("rank scales r_d {r_d:.3}, r_t {r_t:.3}\n");

    println!("Y | Y^dt (first 5 drugs)");
    for i in 0..5 {
        let known: Vec<String> = (0..6)
            .map(|j| ds.interactions().get(i, j).to_string())
            .collect();
        let joint: Vec<String> = (0..6)
            .map(|j| format!("{:.2}", rec.y_joint[(i, j)]))
            .collect();
        println!("{}  |  {}", known.join(" "), joint.join(" "));
    }

    let model = fit_wknnir(ds, 3, 0.7)?;
    assert_eq!(model.recovery(), &rec);
    Ok(())
}
