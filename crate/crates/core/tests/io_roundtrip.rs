use ndarray::array;
use proptest::prelude::*;

use wknnir::io::{read_labeled_matrix, write_dataset};
use wknnir::synthetic::{generate, SyntheticConfig};
use wknnir::{load_dataset_from, DatasetPaths, DtiDataset, Orientation};

fn small() -> DtiDataset {
    DtiDataset::from_matrices(
        array![[1.0, 0.5, 0.1], [0.5, 1.0, 0.2], [0.1, 0.2, 1.0]],
        array![[1.0, 0.3], [0.3, 1.0]],
        array![[1, 0], [0, 1], [1, 1]],
    )
    .unwrap()
}

#[test]
fn rewrite_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let ds = small();
    for orientation in [Orientation::DrugRows, Orientation::TargetRows] {
        let a = DatasetPaths::gold_standard(dir.path(), "a");
        let b = DatasetPaths::gold_standard(dir.path(), "b");
        write_dataset(&ds, &a, orientation).unwrap();
        let back = load_dataset_from(&a, orientation).unwrap();
        assert_eq!(back, ds);
        write_dataset(&back, &b, orientation).unwrap();
        for (x, y) in [
            (&a.interactions, &b.interactions),
            (&a.drug_sim, &b.drug_sim),
            (&a.target_sim, &b.target_sim),
        ] {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
    }
}

#[test]
fn target_rows_file_is_transposed() {
    let dir = tempfile::tempdir().unwrap();
    let paths = DatasetPaths::gold_standard(dir.path(), "x");
    write_dataset(&small(), &paths, Orientation::TargetRows).unwrap();
    let raw = read_labeled_matrix(&paths.interactions).unwrap();
    assert_eq!(raw.row_ids, vec!["t0", "t1"]);
    assert_eq!(raw.col_ids, vec!["d0", "d1", "d2"]);
    assert_eq!(raw.values, array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]);
}

#[test]
fn similarity_rows_reordered_by_id() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.tsv");
    let sd = dir.path().join("sd.tsv");
    let st = dir.path().join("st.tsv");
    std::fs::write(&y, "\tT1\tT2\nD1\t1\t0\nD2\t0\t1\n").unwrap();
    std::fs::write(&sd, "\tD2\tD1\nD2\t1\t0.4\nD1\t0.4\t1\n").unwrap();
    std::fs::write(&st, "\tT1\tT2\nT1\t1\t0.7\nT2\t0.7\t1\n").unwrap();
    let ds = wknnir::load_dataset(&y, &sd, &st, Orientation::DrugRows).unwrap();
    assert_eq!(ds.drug_ids(), ["D1", "D2"]);
    assert_eq!(ds.drug_sim().get(0, 1), 0.4);
    assert_eq!(ds.interactions().get(1, 1), 1);
}

#[test]
fn loader_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.tsv");
    let sd = dir.path().join("sd.tsv");
    let st = dir.path().join("st.tsv");
    std::fs::write(&st, "\tT1\nT1\t1\n").unwrap();
    std::fs::write(&sd, "\tD1\nD1\t1\n").unwrap();

    std::fs::write(&y, "\tT1\nD1\t0.5\n").unwrap();
    let e = wknnir::load_dataset(&y, &sd, &st, Orientation::DrugRows).unwrap_err();
    assert!(e.to_string().contains("non-binary"), "{e}");

    std::fs::write(&y, "\tT1\nD9\t1\n").unwrap();
    assert!(wknnir::load_dataset(&y, &sd, &st, Orientation::DrugRows).is_err());

    std::fs::write(&y, "\tT1\nD1\tx\n").unwrap();
    assert!(wknnir::load_dataset(&y, &sd, &st, Orientation::DrugRows).is_err());

    assert!(
        wknnir::load_dataset(dir.path().join("missing"), &sd, &st, Orientation::DrugRows).is_err()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_datasets_round_trip(n in 2usize..12, m in 2usize..10, seed in any::<u64>(), rows_are_targets in any::<bool>()) {
        let ds = generate(&SyntheticConfig { n_drugs: n, n_targets: m, seed, ..Default::default() }).unwrap();
        let orientation = if rows_are_targets { Orientation::TargetRows } else { Orientation::DrugRows };
        let dir = tempfile::tempdir().unwrap();
        let paths = DatasetPaths::gold_standard(dir.path(), "g");
        write_dataset(&ds, &paths, orientation).unwrap();
        prop_assert_eq!(load_dataset_from(&paths, orientation).unwrap(), ds);
    }
}
