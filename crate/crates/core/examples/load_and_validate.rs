//! Write a dataset to TSV, read it back and list validation findings.
//!
//!     cargo run --example load_and_validate

use wknnir::io::write_dataset;
use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{load_dataset_from, validate_dataset, DatasetPaths, Orientation};

fn main() -> wknnir::Result<()> {
    let ds = generate(&SyntheticConfig {
        n_drugs: 12,
        n_targets: 8,
        seed: 4,
        ..Default::default()
    })?;
    let dir = std::env::temp_dir().join("wknnir-load-example");
    std::fs::create_dir_all(&dir).map_err(|e| wknnir::Error::Output(e.to_string()))?;
    let paths = DatasetPaths::gold_standard(&dir, "toy");
    write_dataset(&ds, &paths, Orientation::TargetRows)?;

    let back = load_dataset_from(&paths, Orientation::TargetRows)?;
    assert_eq!(back, ds);
    println!("wrote and reloaded {}", paths.interactions.display());
    println!(
        "{} drugs x {} targets, {} interactions",
        back.n_drugs(),
        back.n_targets(),
        back.interactions().count_ones()
    );
    let findings = validate_dataset(&back);
    if findings.is_empty() {
        println!("no findings");
    }
    for f in findings {
        println!("{f}");
    }
    Ok(())
}
