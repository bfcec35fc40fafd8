//! Exhaustive grid search over `(k, eta)` by inner cross-validation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DtiDataset;
use crate::error::{Error, Result};
use crate::eval::cv::run_cv;
use crate::eval::folds::CvPlan;
use crate::eval::learner::{LearnerSpec, Method};
use crate::model::{KnnParams, Setting};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub k: Vec<usize>,
    pub eta: Vec<f64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            k: vec![1, 2, 3, 5, 7, 9],
            eta: (1..=10).map(|t| t as f64 / 10.0).collect(),
        }
    }
}

impl ParamGrid {
    /// Cells in search order: `k` outer, `eta` inner.
    pub fn cells(&self) -> Result<Vec<KnnParams>> {
        if self.k.is_empty() || self.eta.is_empty() {
            return Err(Error::param("empty parameter grid"));
        }
        let mut out = Vec::with_capacity(self.k.len() * self.eta.len());
        for &k in &self.k {
            for &eta in &self.eta {
                out.push(KnnParams::new(k, eta)?);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScore {
    pub params: KnnParams,
    /// `None` when no inner fold had a positive pair.
    pub mean_aupr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub setting: Setting,
    pub method: Method,
    pub best: KnnParams,
    pub best_aupr: Option<f64>,
    pub scores: Vec<GridScore>,
}

/// Scores every grid cell by single-repetition CV with `plan` and returns the
/// best. Ties keep the earliest cell.
pub fn tune_hyperparameters(
    ds: &DtiDataset,
    method: Method,
    grid: &ParamGrid,
    plan: &CvPlan,
) -> Result<TuneResult> {
    let cells = grid.cells()?;
    let scores = cells
        .par_iter()
        .map(|&params| {
            let cv = run_cv(ds, &LearnerSpec::fixed(method, params), plan)?;
            Ok(GridScore {
                params,
                mean_aupr: cv.mean_aupr,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        let better = match (s.mean_aupr, scores[best].mean_aupr) {
            (Some(a), Some(b)) => a > b,
            (Some(_), None) => true,
            _ => false,
        };
        if better {
            best = i;
        }
    }
    Ok(TuneResult {
        setting: plan.setting,
        method,
        best: scores[best].params,
        best_aupr: scores[best].mean_aupr,
        scores,
    })
}

/// Inner-CV plan for a training split: the requested (or default) fold
/// count, capped by the number of entities that can be held out.
pub(crate) fn inner_plan(
    ds: &DtiDataset,
    setting: Setting,
    folds: Option<usize>,
    seed: u64,
) -> CvPlan {
    let wanted = folds.unwrap_or_else(|| CvPlan::default_inner_folds(setting));
    let available = match setting {
        Setting::S2 => ds.n_drugs(),
        Setting::S3 => ds.n_targets(),
        Setting::S4 => ds.n_drugs().min(ds.n_targets()),
    };
    CvPlan {
        setting,
        folds: wanted.min(available).max(2),
        repetitions: 1,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{generate, SyntheticConfig};

    #[test]
    fn default_grid_order() {
        let cells = ParamGrid::default().cells().unwrap();
        assert_eq!(cells.len(), 60);
        assert_eq!(cells[0], KnnParams { k: 1, eta: 0.1 });
        assert_eq!(cells[10], KnnParams { k: 2, eta: 0.1 });
        assert_eq!(cells[59], KnnParams { k: 9, eta: 1.0 });
    }

    #[test]
    fn picks_the_maximum_and_earliest_on_ties() {
        let ds = generate(&SyntheticConfig {
            n_drugs: 16,
            n_targets: 12,
            seed: 3,
            ..Default::default()
        })
        .unwrap();
        let grid = ParamGrid {
            k: vec![1, 3, 3],
            eta: vec![0.5, 0.5],
        };
        let plan = CvPlan::new(Setting::S2).with_folds(4).with_repetitions(1);
        let r = tune_hyperparameters(&ds, Method::Wknnir, &grid, &plan).unwrap();
        assert_eq!(r.scores.len(), 6);
        let max = r
            .scores
            .iter()
            .filter_map(|s| s.mean_aupr)
            .fold(f64::MIN, f64::max);
        assert_eq!(r.best_aupr, Some(max));
        let first = r
            .scores
            .iter()
            .position(|s| s.mean_aupr == Some(max))
            .unwrap();
        assert_eq!(r.best, r.scores[first].params);
        // duplicated cells score identically
        assert_eq!(r.scores[0].mean_aupr, r.scores[1].mean_aupr);
        assert_eq!(r.scores[2].mean_aupr, r.scores[4].mean_aupr);
        if r.best.k == 3 {
            assert_eq!(first, 2);
        }
    }
}
