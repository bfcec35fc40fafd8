//! Cross-validated evaluation, parameter search and novel-pair ranking.

pub mod aupr;
pub mod cv;
pub mod folds;
pub mod learner;
pub mod novel;
pub mod tune;

pub use aupr::aupr;
pub use cv::{run_cv, CvResult, FoldResult};
pub use folds::{generate_folds, CvPlan, Fold};
pub use learner::{LearnerSpec, Method, ParamChoice};
pub use novel::{rank_novel, rank_novel_with, write_novel_csv, NovelCandidate};
pub use tune::{tune_hyperparameters, GridScore, ParamGrid, TuneResult};
