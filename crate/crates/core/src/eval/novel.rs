//! Ranking of unobserved pairs by their held-out scores.

use std::io::Write;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DtiDataset;
use crate::error::{Error, Result};
use crate::eval::cv::fold_scores;
use crate::eval::folds::{generate_folds, CvPlan};
use crate::eval::learner::LearnerSpec;
use crate::model::Setting;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NovelCandidate {
    pub drug: String,
    pub target: String,
    pub score: f64,
}

/// Scores every pair once from a single CV repetition in `setting`, keeps
/// the pairs without a known interaction and returns the `top_n` highest.
/// Ties are broken by drug ID, then target ID.
pub fn rank_novel(
    ds: &DtiDataset,
    spec: &LearnerSpec,
    setting: Setting,
    top_n: usize,
    seed: u64,
) -> Result<Vec<NovelCandidate>> {
    rank_novel_with(ds, spec, &CvPlan::new(setting).with_seed(seed), top_n)
}

/// [`rank_novel`] with an explicit fold count and seed. Only the first
/// repetition of `plan` is used.
pub fn rank_novel_with(
    ds: &DtiDataset,
    spec: &LearnerSpec,
    plan: &CvPlan,
    top_n: usize,
) -> Result<Vec<NovelCandidate>> {
    if top_n == 0 {
        return Err(Error::param("top_n must be at least 1"));
    }
    let plan = plan.with_repetitions(1);
    let folds = generate_folds(ds, &plan)?;
    let blocks = folds
        .par_iter()
        .map(|f| fold_scores(ds, spec, f, plan.seed).map(|(_, s)| s))
        .collect::<Result<Vec<_>>>()?;

    let mut scores = Array2::<f64>::from_elem((ds.n_drugs(), ds.n_targets()), f64::NAN);
    for (fold, block) in folds.iter().zip(&blocks) {
        for (a, &i) in fold.test_drugs.iter().enumerate() {
            for (b, &j) in fold.test_targets.iter().enumerate() {
                scores[(i, j)] = block[(a, b)];
            }
        }
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::param("cross-validation left pairs unscored"));
    }

    let y = ds.interactions();
    let mut out: Vec<NovelCandidate> = scores
        .indexed_iter()
        .filter(|((i, j), _)| y.get(*i, *j) == 0)
        .map(|((i, j), &score)| NovelCandidate {
            drug: ds.drug_ids()[i].clone(),
            target: ds.target_ids()[j].clone(),
            score,
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.drug.cmp(&b.drug))
            .then_with(|| a.target.cmp(&b.target))
    });
    out.truncate(top_n);
    Ok(out)
}

/// `rank,drug,target,score`.
pub fn write_novel_csv<W: Write>(candidates: &[NovelCandidate], w: W) -> Result<()> {
    let fail = |e: csv::Error| Error::Output(e.to_string());
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["rank", "drug", "target", "score"])
        .map_err(fail)?;
    for (r, c) in candidates.iter().enumerate() {
        out.write_record([
            &(r + 1).to_string(),
            &c.drug,
            &c.target,
            &c.score.to_string(),
        ])
        .map_err(fail)?;
    }
    out.flush().map_err(|e| Error::Output(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::learner::Method;
    use crate::model::KnnParams;
    use crate::synthetic::{generate, SyntheticConfig};

    #[test]
    fn sorted_unobserved_and_truncated() {
        let ds = generate(&SyntheticConfig {
            n_drugs: 20,
            n_targets: 15,
            seed: 8,
            ..Default::default()
        })
        .unwrap();
        let spec = LearnerSpec::fixed(Method::Wknnir, KnnParams { k: 3, eta: 0.8 });
        for setting in Setting::ALL {
            let top = rank_novel(&ds, &spec, setting, 10, 1).unwrap();
            assert_eq!(top.len(), 10);
            for w in top.windows(2) {
                assert!(
                    w[0].score > w[1].score
                        || (w[0].score == w[1].score
                            && (&w[0].drug, &w[0].target) < (&w[1].drug, &w[1].target))
                );
            }
            for c in &top {
                let i = ds.drug_ids().iter().position(|d| *d == c.drug).unwrap();
                let j = ds.target_ids().iter().position(|t| *t == c.target).unwrap();
                assert_eq!(ds.interactions().get(i, j), 0);
            }
        }
        let zeros = 20 * 15 - ds.interactions().count_ones();
        assert_eq!(
            rank_novel(&ds, &spec, Setting::S2, 10_000, 1)
                .unwrap()
                .len(),
            zeros
        );
        assert!(rank_novel(&ds, &spec, Setting::S2, 0, 1).is_err());
    }
}
