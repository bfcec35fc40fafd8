//! Cross-validation splits for the three inductive settings.
//!
//! New-drug CV holds out a fold of drugs with all their rows; new-target CV
//! holds out a fold of targets. Block-wise CV crosses a drug partition with
//! a target partition: each block tests the held-out drugs against the
//! held-out targets and trains on the remaining drugs × remaining targets
//! only.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{DtiDataset, Side};
use crate::error::{Error, Result};
use crate::model::{EntityQuery, Setting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvPlan {
    pub setting: Setting,
    /// Folds per partitioned side.
    pub folds: usize,
    pub repetitions: usize,
    pub seed: u64,
}

impl CvPlan {
    /// Ten folds for the single-side settings, three per side for block-wise
    /// CV, two repetitions.
    pub fn new(setting: Setting) -> Self {
        Self {
            setting,
            folds: Self::default_folds(setting),
            repetitions: 2,
            seed: 0,
        }
    }

    pub fn default_folds(setting: Setting) -> usize {
        match setting {
            Setting::S2 | Setting::S3 => 10,
            Setting::S4 => 3,
        }
    }

    /// Default inner-CV fold count used for parameter selection.
    pub fn default_inner_folds(setting: Setting) -> usize {
        match setting {
            Setting::S2 | Setting::S3 => 5,
            Setting::S4 => 2,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_folds(mut self, folds: usize) -> Self {
        self.folds = folds;
        self
    }

    pub fn with_repetitions(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }
}

/// One train/test split. Index lists are in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub setting: Setting,
    pub repetition: usize,
    pub index: usize,
    pub train_drugs: Vec<usize>,
    pub train_targets: Vec<usize>,
    pub test_drugs: Vec<usize>,
    pub test_targets: Vec<usize>,
}

impl Fold {
    pub fn training(&self, ds: &DtiDataset) -> Result<DtiDataset> {
        ds.subset(&self.train_drugs, &self.train_targets)
    }

    /// Query lists for the test block: held-out entities become similarity
    /// profiles against the training entities of their side, training
    /// entities become indices into the training sub-dataset.
    pub fn test_queries(&self, ds: &DtiDataset) -> Result<(Vec<EntityQuery>, Vec<EntityQuery>)> {
        let drugs = self.side_queries(ds, Side::Drug)?;
        let targets = self.side_queries(ds, Side::Target)?;
        Ok((drugs, targets))
    }

    fn side_queries(&self, ds: &DtiDataset, side: Side) -> Result<Vec<EntityQuery>> {
        let (test, train) = match side {
            Side::Drug => (&self.test_drugs, &self.train_drugs),
            Side::Target => (&self.test_targets, &self.train_targets),
        };
        let held_out = matches!(
            (self.setting, side),
            (Setting::S2, Side::Drug) | (Setting::S3, Side::Target) | (Setting::S4, _)
        );
        let sim = ds.similarity(side);
        test.iter()
            .map(|&e| {
                if held_out {
                    EntityQuery::profile(sim.profile(e, train), side)
                } else {
                    let pos = train.binary_search(&e).map_err(|_| {
                        Error::param(format!("{side} {e} is not in the training set"))
                    })?;
                    Ok(EntityQuery::Index(pos))
                }
            })
            .collect()
    }

    pub fn test_labels(&self, ds: &DtiDataset) -> Array2<u8> {
        ds.interactions()
            .select(&self.test_drugs, &self.test_targets)
            .view()
            .to_owned()
    }
}

/// Shuffles `0..len` and deals it round-robin into `folds` parts.
fn deal(len: usize, folds: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); folds];
    for (pos, e) in order.into_iter().enumerate() {
        parts[pos % folds].push(e);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts
}

fn complement(len: usize, part: &[usize]) -> Vec<usize> {
    (0..len)
        .filter(|i| part.binary_search(i).is_err())
        .collect()
}

pub fn generate_folds(ds: &DtiDataset, plan: &CvPlan) -> Result<Vec<Fold>> {
    let (n, m) = (ds.n_drugs(), ds.n_targets());
    if plan.folds < 2 {
        return Err(Error::param("at least 2 folds are required"));
    }
    if plan.repetitions == 0 {
        return Err(Error::param("at least 1 repetition is required"));
    }
    let need = |len: usize, side: Side| {
        if plan.folds > len {
            Err(Error::param(format!(
                "{} folds exceed the {len} {side}s available",
                plan.folds
            )))
        } else {
            Ok(())
        }
    };
    match plan.setting {
        Setting::S2 => need(n, Side::Drug)?,
        Setting::S3 => need(m, Side::Target)?,
        Setting::S4 => {
            need(n, Side::Drug)?;
            need(m, Side::Target)?;
        }
    }

    let all_drugs: Vec<usize> = (0..n).collect();
    let all_targets: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    for rep in 0..plan.repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed.wrapping_add(rep as u64));
        match plan.setting {
            Setting::S2 => {
                for (index, part) in deal(n, plan.folds, &mut rng).into_iter().enumerate() {
                    out.push(Fold {
                        setting: plan.setting,
                        repetition: rep,
                        index,
                        train_drugs: complement(n, &part),
                        train_targets: all_targets.clone(),
                        test_drugs: part,
                        test_targets: all_targets.clone(),
                    });
                }
            }
            Setting::S3 => {
                for (index, part) in deal(m, plan.folds, &mut rng).into_iter().enumerate() {
                    out.push(Fold {
                        setting: plan.setting,
                        repetition: rep,
                        index,
                        train_drugs: all_drugs.clone(),
                        train_targets: complement(m, &part),
                        test_drugs: all_drugs.clone(),
                        test_targets: part,
                    });
                }
            }
            Setting::S4 => {
                let drug_parts = deal(n, plan.folds, &mut rng);
                let target_parts = deal(m, plan.folds, &mut rng);
                for (fd, dp) in drug_parts.iter().enumerate() {
                    for (ft, tp) in target_parts.iter().enumerate() {
                        out.push(Fold {
                            setting: plan.setting,
                            repetition: rep,
                            index: fd * plan.folds + ft,
                            train_drugs: complement(n, dp),
                            train_targets: complement(m, tp),
                            test_drugs: dp.clone(),
                            test_targets: tp.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{generate, SyntheticConfig};

    fn ds(n: usize, m: usize) -> DtiDataset {
        generate(&SyntheticConfig {
            n_drugs: n,
            n_targets: m,
            seed: 1,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn new_drug_folds_partition_drugs() {
        let d = ds(54, 6);
        let folds = generate_folds(&d, &CvPlan::new(Setting::S2).with_repetitions(1)).unwrap();
        let mut sizes: Vec<usize> = folds.iter().map(|f| f.test_drugs.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(sizes, vec![6, 6, 6, 6, 5, 5, 5, 5, 5, 5]);
        let mut seen: Vec<usize> = folds.iter().flat_map(|f| f.test_drugs.clone()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..54).collect::<Vec<_>>());
        for f in &folds {
            assert!(f.test_drugs.iter().all(|i| !f.train_drugs.contains(i)));
            assert_eq!(f.train_drugs.len() + f.test_drugs.len(), 54);
        }
    }

    #[test]
    fn block_folds_partition_pairs() {
        let d = ds(10, 8);
        let folds = generate_folds(&d, &CvPlan::new(Setting::S4).with_repetitions(1)).unwrap();
        assert_eq!(folds.len(), 9);
        let mut hits = Array2::<u32>::zeros((10, 8));
        for f in &folds {
            for &i in &f.test_drugs {
                for &j in &f.test_targets {
                    hits[(i, j)] += 1;
                }
                assert!(!f.train_drugs.contains(&i));
            }
            for &j in &f.test_targets {
                assert!(!f.train_targets.contains(&j));
            }
        }
        assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn seeded_and_reshuffled_per_repetition() {
        let d = ds(20, 6);
        let plan = CvPlan::new(Setting::S2).with_seed(7);
        let a = generate_folds(&d, &plan).unwrap();
        assert_eq!(a, generate_folds(&d, &plan).unwrap());
        assert_eq!(a.len(), 20);
        let rep0: Vec<_> = a
            .iter()
            .filter(|f| f.repetition == 0)
            .map(|f| f.test_drugs.clone())
            .collect();
        let rep1: Vec<_> = a
            .iter()
            .filter(|f| f.repetition == 1)
            .map(|f| f.test_drugs.clone())
            .collect();
        assert_ne!(rep0, rep1);
    }

    #[test]
    fn too_many_folds() {
        assert!(generate_folds(&ds(4, 20), &CvPlan::new(Setting::S2)).is_err());
        assert!(generate_folds(&ds(20, 4), &CvPlan::new(Setting::S3)).is_err());
        assert!(generate_folds(&ds(20, 20), &CvPlan::new(Setting::S2).with_folds(1)).is_err());
    }

    #[test]
    fn queries_match_setting() {
        let d = ds(12, 9);
        for setting in Setting::ALL {
            let plan = CvPlan::new(setting).with_folds(3).with_repetitions(1);
            for f in generate_folds(&d, &plan).unwrap() {
                let (dq, tq) = f.test_queries(&d).unwrap();
                assert_eq!(dq.len(), f.test_drugs.len());
                assert_eq!(tq.len(), f.test_targets.len());
                let expect_drug_profile = setting != Setting::S3;
                let expect_target_profile = setting != Setting::S2;
                assert!(dq.iter().all(|q| q.is_index() != expect_drug_profile));
                assert!(tq.iter().all(|q| q.is_index() != expect_target_profile));
            }
        }
    }
}
