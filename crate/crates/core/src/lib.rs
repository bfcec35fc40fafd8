//! Weighted nearest-neighbor drug-target interaction prediction.
//!
//! The crate scores drug-target pairs in the three inductive settings (new
//! drug, new target, both new) with a weighted k-nearest-neighbor rule
//! ([`wknn`]) and its interaction-recovery variant ([`wknnir`]), which
//! first completes the training interactions from neighboring rows and
//! columns and then scales neighbor ranks by the local imbalance of each
//! side ([`imbalance`]). Sampling ensembles ([`ensemble`]) train members on
//! drug and target subsets drawn uniformly, by interaction count or by local
//! imbalance. [`eval`] provides repeated cross-validation, grid search and
//! ranking of unobserved pairs.

pub mod cli;
pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod imbalance;
pub mod io;
pub mod model;
pub mod neighbors;
pub mod synthetic;
pub mod wknn;
pub mod wknnir;

pub use dataset::{
    dataset_stats, validate_dataset, DatasetStats, DtiDataset, Finding, InteractionMatrix,
    QueryProfile, Severity, Side, SimilarityMatrix,
};
pub use ensemble::{train_ensemble, EnsembleConfig, EnsembleModel, SamplingKind, SamplingStrategy};
pub use error::{Error, Result};
pub use eval::{
    aupr, generate_folds, rank_novel, run_cv, tune_hyperparameters, CvPlan, CvResult, LearnerSpec,
    Method, ParamGrid,
};
pub use imbalance::{
    dataset_local_imbalance, entity_importance, imbalance_report, pair_local_imbalance,
    ImbalanceReport, NeighborConvention,
};
pub use io::{load_dataset, load_dataset_from, DatasetPaths, Orientation};
pub use model::{EntityQuery, KnnParams, PairQuery, Predictor, Setting};
pub use neighbors::{knn, Neighbor, NeighborList};
pub use wknn::{fit_wknn, predict_wknn, WkNNModel};
pub use wknnir::{build_recovery, fit_wknnir, predict_wknnir, RecoverySet, WkNNIRModel};
