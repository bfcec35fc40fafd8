//! Repeated cross-validation with per-fold AUPR.

use std::io::Write;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DtiDataset;
use crate::error::{Error, Result};
use crate::eval::aupr::aupr;
use crate::eval::folds::{generate_folds, CvPlan, Fold};
use crate::eval::learner::{LearnerSpec, ParamChoice};
use crate::eval::tune::{inner_plan, tune_hyperparameters};
use crate::model::{KnnParams, Setting};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub repetition: usize,
    pub fold: usize,
    pub params: KnnParams,
    /// `None` when the test block holds no interaction.
    pub aupr: Option<f64>,
    pub n_pairs: usize,
    pub n_positive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub setting: Setting,
    pub learner: String,
    pub folds: Vec<FoldResult>,
    /// Mean over folds with a defined AUPR.
    pub mean_aupr: Option<f64>,
}

impl CvResult {
    /// `setting,method,fold,repetition,aupr`, one row per fold and a final
    /// `mean,all` row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let na = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |a| a.to_string());
        let setting = self.setting.to_string();
        let fail = |e: csv::Error| Error::Output(e.to_string());
        out.write_record(["setting", "method", "fold", "repetition", "aupr"])
            .map_err(fail)?;
        for f in &self.folds {
            out.write_record([
                setting.as_str(),
                &self.learner,
                &f.fold.to_string(),
                &f.repetition.to_string(),
                &na(f.aupr),
            ])
            .map_err(fail)?;
        }
        out.write_record([
            setting.as_str(),
            &self.learner,
            "mean",
            "all",
            &na(self.mean_aupr),
        ])
        .map_err(fail)?;
        out.flush().map_err(|e| Error::Output(e.to_string()))
    }
}

/// Seed of the inner search on a given outer split.
fn inner_seed(seed: u64, fold: &Fold) -> u64 {
    seed.wrapping_add(1_000_003 * (fold.repetition as u64 + 1) + fold.index as u64)
}

/// Trains on the split's training part and scores its test block.
pub(crate) fn fold_scores(
    ds: &DtiDataset,
    spec: &LearnerSpec,
    fold: &Fold,
    seed: u64,
) -> Result<(KnnParams, Array2<f64>)> {
    let train = fold.training(ds)?;
    let params = match &spec.params {
        ParamChoice::Fixed(p) => *p,
        ParamChoice::Tuned { grid, inner_folds } => {
            let plan = inner_plan(&train, fold.setting, *inner_folds, inner_seed(seed, fold));
            tune_hyperparameters(&train, spec.method, grid, &plan)?.best
        }
    };
    let (drugs, targets) = fold.test_queries(ds)?;
    let model = spec.fit_with(train, params)?;
    Ok((params, model.predict_grid(&drugs, &targets)?))
}

pub fn run_cv(ds: &DtiDataset, spec: &LearnerSpec, plan: &CvPlan) -> Result<CvResult> {
    let folds = generate_folds(ds, plan)?;
    let results = folds
        .par_iter()
        .map(|fold| {
            let (params, scores) = fold_scores(ds, spec, fold, plan.seed)?;
            let labels: Vec<bool> = fold.test_labels(ds).iter().map(|&y| y == 1).collect();
            let n_positive = labels.iter().filter(|&&l| l).count();
            let scores: Vec<f64> = scores.iter().copied().collect();
            let value = match aupr(&scores, &labels) {
                Ok(v) => Some(v),
                Err(Error::AuprUndefined) => None,
                Err(e) => return Err(e),
            };
            Ok(FoldResult {
                repetition: fold.repetition,
                fold: fold.index,
                params,
                aupr: value,
                n_pairs: labels.len(),
                n_positive,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let defined: Vec<f64> = results.iter().filter_map(|f| f.aupr).collect();
    let mean_aupr =
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    Ok(CvResult {
        setting: plan.setting,
        learner: spec.name(),
        folds: results,
        mean_aupr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{EnsembleConfig, SamplingStrategy};
    use crate::eval::learner::Method;
    use crate::synthetic::{generate, SyntheticConfig};

    fn ds() -> DtiDataset {
        generate(&SyntheticConfig {
            n_drugs: 24,
            n_targets: 18,
            seed: 5,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn fold_count_and_mean() {
        let d = ds();
        for setting in Setting::ALL {
            let plan = CvPlan::new(setting).with_folds(3).with_seed(2);
            let spec = LearnerSpec::fixed(Method::Wknnir, KnnParams { k: 3, eta: 0.7 });
            let r = run_cv(&d, &spec, &plan).unwrap();
            let per_rep = if setting == Setting::S4 { 9 } else { 3 };
            assert_eq!(r.folds.len(), 2 * per_rep);
            let defined: Vec<f64> = r.folds.iter().filter_map(|f| f.aupr).collect();
            let mean = defined.iter().sum::<f64>() / defined.len() as f64;
            assert!((r.mean_aupr.unwrap() - mean).abs() < 1e-15);
            assert!(defined.iter().all(|a| (0.0..=1.0).contains(a)));
        }
    }

    #[test]
    fn clustered_data_beats_prevalence() {
        let d = ds();
        let prevalence = d.interactions().count_ones() as f64 / (24.0 * 18.0);
        let spec = LearnerSpec::fixed(Method::Wknn, KnnParams { k: 5, eta: 0.9 });
        let r = run_cv(&d, &spec, &CvPlan::new(Setting::S2).with_folds(4)).unwrap();
        assert!(r.mean_aupr.unwrap() > 2.0 * prevalence);
    }

    #[test]
    fn deterministic_including_tuning_and_ensembles() {
        let d = ds();
        let mut spec = LearnerSpec::tuned(Method::Wknnir).with_ensemble(EnsembleConfig {
            q: 4,
            ..EnsembleConfig::new(SamplingStrategy::local(0.1, 5))
        });
        if let ParamChoice::Tuned { grid, .. } = &mut spec.params {
            grid.k = vec![2, 5];
            grid.eta = vec![0.5, 1.0];
        }
        let plan = CvPlan::new(Setting::S4)
            .with_folds(2)
            .with_repetitions(1)
            .with_seed(9);
        let a = run_cv(&d, &spec, &plan).unwrap();
        let b = run_cv(&d, &spec, &plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.learner, "ELS-WkNNIR");
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        a.write_csv(&mut buf_a).unwrap();
        b.write_csv(&mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
    }

    #[test]
    fn csv_layout_and_missing_folds() {
        let r = CvResult {
            setting: Setting::S3,
            learner: "WkNN".into(),
            folds: vec![
                FoldResult {
                    repetition: 0,
                    fold: 0,
                    params: KnnParams { k: 1, eta: 1.0 },
                    aupr: Some(0.5),
                    n_pairs: 4,
                    n_positive: 1,
                },
                FoldResult {
                    repetition: 0,
                    fold: 1,
                    params: KnnParams { k: 1, eta: 1.0 },
                    aupr: None,
                    n_pairs: 4,
                    n_positive: 0,
                },
            ],
            mean_aupr: Some(0.5),
        };
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "setting,method,fold,repetition,aupr\nS3,WkNN,0,0,0.5\nS3,WkNN,1,0,NA\nS3,WkNN,mean,all,0.5\n"
        );
    }
}
