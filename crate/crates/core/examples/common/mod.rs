//! Dataset selection shared by the examples.
//!
//! With a dataset name as first argument and `DTI_DATA_DIR` set, the
//! gold-standard files are loaded; otherwise a seeded synthetic dataset is
//! generated.

use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{load_dataset_from, DatasetPaths, DtiDataset, Orientation};

pub fn dataset() -> wknnir::Result<(String, DtiDataset)> {
    match (std::env::args().nth(1), std::env::var_os("DTI_DATA_DIR")) {
        (Some(name), Some(dir)) => {
            let ds = load_dataset_from(
                &DatasetPaths::gold_standard(dir, &name),
                Orientation::TargetRows,
            )?;
            Ok((name, ds))
        }
        _ => Ok(("synthetic".into(), generate(&SyntheticConfig::default())?)),
    }
}
