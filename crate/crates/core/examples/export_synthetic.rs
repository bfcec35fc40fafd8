//! Write a synthetic dataset in the gold-standard file layout, for use with
//! the `dti` binary.
//!
//!     cargo run --example export_synthetic -- DIR [NAME] [N_DRUGS] [N_TARGETS] [SEED]
//!     dti cv --dataset NAME --data-dir DIR --setting S2

use wknnir::io::write_dataset;
use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{DatasetPaths, Orientation};

fn main() -> wknnir::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let dir = args.first().map(String::as_str).unwrap_or(".");
    let name = args.get(1).map(String::as_str).unwrap_or("synthetic");
    let num =
        |i: usize, default: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let cfg = SyntheticConfig {
        n_drugs: num(2, 30),
        n_targets: num(3, 20),
        seed: num(4, 0) as u64,
        ..Default::default()
    };
    std::fs::create_dir_all(dir).map_err(|e| wknnir::Error::Output(e.to_string()))?;
    let paths = DatasetPaths::gold_standard(dir, name);
    write_dataset(&generate(&cfg)?, &paths, Orientation::TargetRows)?;
    println!("{}", paths.interactions.display());
    Ok(())
}
