//! Baseline weighted k-nearest-neighbor predictor.
//!
//! A new drug is scored from the interactions of its `k` most similar
//! training drugs with the target, each neighbor weighted by
//! `eta^(rank - 1) * similarity` and normalized by the plain similarity total.
//! A new target is scored symmetrically. A new drug-target pair is scored
//! from the `k x k` grid of neighbor pairs with weight
//! `eta^(rank_d + rank_t - 2) * s_d * s_t`.

use std::sync::Arc;

use ndarray::Array2;

use crate::dataset::DtiDataset;
use crate::error::Result;
use crate::model::{EntityQuery, KnnParams, NeighborScorer, PairQuery, Predictor};

#[derive(Debug, Clone)]
pub struct WkNNModel {
    dataset: Arc<DtiDataset>,
    params: KnnParams,
    labels: Array2<f64>,
}

impl WkNNModel {
    /// Lazy learner: validates parameters and keeps the training data.
    pub fn fit(dataset: impl Into<Arc<DtiDataset>>, params: KnnParams) -> Result<Self> {
        params.validate()?;
        let dataset = dataset.into();
        let labels = dataset.interactions().to_f64();
        Ok(Self {
            dataset,
            params,
            labels,
        })
    }

    pub fn params(&self) -> KnnParams {
        self.params
    }

    pub fn dataset(&self) -> &DtiDataset {
        &self.dataset
    }
}

pub fn fit_wknn(dataset: impl Into<Arc<DtiDataset>>, k: usize, eta: f64) -> Result<WkNNModel> {
    WkNNModel::fit(dataset, KnnParams { k, eta })
}

pub fn predict_wknn(model: &WkNNModel, query: &PairQuery) -> Result<f64> {
    model.predict(query)
}

impl Predictor for WkNNModel {
    fn n_drugs(&self) -> usize {
        self.dataset.n_drugs()
    }

    fn n_targets(&self) -> usize {
        self.dataset.n_targets()
    }

    fn predict_grid(&self, drugs: &[EntityQuery], targets: &[EntityQuery]) -> Result<Array2<f64>> {
        NeighborScorer {
            params: self.params,
            s2_labels: &self.labels,
            s3_labels: &self.labels,
            s4_labels: &self.labels,
            drug_rank_scale: 1.0,
            target_rank_scale: 1.0,
        }
        .score_grid(drugs, targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::f1;
    use crate::dataset::Side;
    use crate::error::Error;
    use crate::synthetic::{generate, SyntheticConfig};
    use proptest::prelude::*;

    fn drug(v: Vec<f64>) -> EntityQuery {
        EntityQuery::profile(v, Side::Drug).unwrap()
    }

    fn target(v: Vec<f64>) -> EntityQuery {
        EntityQuery::profile(v, Side::Target).unwrap()
    }

    #[test]
    fn echoes_parameters() {
        let m = fit_wknn(f1(), 2, 0.5).unwrap();
        assert_eq!(m.params(), KnnParams { k: 2, eta: 0.5 });
        assert!(fit_wknn(f1(), 0, 0.5).is_err());
        assert!(fit_wknn(f1(), 2, 1.2).is_err());
    }

    #[test]
    fn f1_new_drug() {
        let m = fit_wknn(f1(), 2, 0.5).unwrap();
        let q = PairQuery::new(drug(vec![0.8, 0.4, 0.0]), EntityQuery::Index(0));
        let expected = (1.0 * 0.8 * 1.0 + 0.5 * 0.4 * 0.0) / (0.8 + 0.4);
        assert!((predict_wknn(&m, &q).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn single_neighbor_with_interaction_scores_one() {
        let m = fit_wknn(f1(), 1, 0.3).unwrap();
        let q = PairQuery::new(drug(vec![0.1, 0.2, 0.9]), EntityQuery::Index(1));
        assert_eq!(predict_wknn(&m, &q).unwrap(), 1.0);
    }

    #[test]
    fn zero_profile_scores_zero() {
        let m = fit_wknn(f1(), 2, 0.5).unwrap();
        let q = PairQuery::new(drug(vec![0.0; 3]), EntityQuery::Index(0));
        assert_eq!(predict_wknn(&m, &q).unwrap(), 0.0);
        let q = PairQuery::new(drug(vec![0.0; 3]), target(vec![0.7, 0.1]));
        assert_eq!(predict_wknn(&m, &q).unwrap(), 0.0);
    }

    #[test]
    fn rejects_transductive_and_bad_shapes() {
        let m = fit_wknn(f1(), 2, 0.5).unwrap();
        let q = PairQuery::new(EntityQuery::Index(0), EntityQuery::Index(1));
        assert!(matches!(
            predict_wknn(&m, &q),
            Err(Error::TransductiveQuery)
        ));
        let q = PairQuery::new(drug(vec![0.1, 0.2]), EntityQuery::Index(1));
        assert!(predict_wknn(&m, &q).is_err());
        let q = PairQuery::new(target(vec![0.1, 0.2, 0.3]), EntityQuery::Index(1));
        assert!(predict_wknn(&m, &q).is_err());
    }

    #[test]
    fn pair_with_k1_copies_nearest_entry() {
        let ds = f1();
        let m = fit_wknn(ds.clone(), 1, 0.4).unwrap();
        let q = PairQuery::new(drug(vec![0.3, 0.1, 0.6]), target(vec![0.2, 0.9]));
        assert_eq!(
            predict_wknn(&m, &q).unwrap(),
            ds.interactions().get(2, 1) as f64
        );
    }

    #[test]
    fn full_ones_column_with_eta_one() {
        let m = fit_wknn(f1(), 2, 1.0).unwrap();
        // nearest two drugs are d0 and d2, both interacting with t0
        let q = PairQuery::new(drug(vec![0.9, 0.1, 0.8]), EntityQuery::Index(0));
        assert_eq!(predict_wknn(&m, &q).unwrap(), 1.0);
    }

    /// Straight transcription of the scoring sums over explicitly sorted
    /// neighbor lists.
    fn oracle(
        ds: &DtiDataset,
        k: usize,
        eta: f64,
        sd: Option<&[f64]>,
        u: usize,
        st: Option<&[f64]>,
        v: usize,
    ) -> f64 {
        let sorted = |s: &[f64]| {
            let mut idx: Vec<usize> = (0..s.len()).collect();
            idx.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap().then(a.cmp(&b)));
            idx.truncate(k);
            idx
        };
        let y = |i: usize, j: usize| ds.interactions().get(i, j) as f64;
        match (sd, st) {
            (Some(sd), None) => {
                let nb = sorted(sd);
                let z: f64 = nb.iter().map(|&i| sd[i]).sum();
                if z == 0.0 {
                    return 0.0;
                }
                nb.iter()
                    .enumerate()
                    .map(|(r, &i)| eta.powi(r as i32) * sd[i] * y(i, v))
                    .sum::<f64>()
                    / z
            }
            (None, Some(st)) => {
                let nb = sorted(st);
                let z: f64 = nb.iter().map(|&j| st[j]).sum();
                if z == 0.0 {
                    return 0.0;
                }
                nb.iter()
                    .enumerate()
                    .map(|(r, &j)| eta.powi(r as i32) * st[j] * y(u, j))
                    .sum::<f64>()
                    / z
            }
            (Some(sd), Some(st)) => {
                let (nd, nt) = (sorted(sd), sorted(st));
                let mut num = 0.0;
                let mut z = 0.0;
                for (a, &i) in nd.iter().enumerate() {
                    for (b, &j) in nt.iter().enumerate() {
                        num += eta.powi((a + b) as i32) * sd[i] * st[j] * y(i, j);
                        z += sd[i] * st[j];
                    }
                }
                if z == 0.0 {
                    0.0
                } else {
                    num / z
                }
            }
            (None, None) => unreachable!(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_brute_force(
            seed in any::<u64>(),
            k in 1usize..10,
            eta_tenths in 0u32..=10,
            sd in prop::collection::vec(0.0f64..=1.0, 8),
            st in prop::collection::vec(0.0f64..=1.0, 6),
            u in 0usize..8,
            v in 0usize..6,
        ) {
            let eta = eta_tenths as f64 / 10.0;
            let ds = generate(&SyntheticConfig { n_drugs: 8, n_targets: 6, seed, ..Default::default() }).unwrap();
            let m = fit_wknn(ds.clone(), k, eta).unwrap();
            let cases = [
                (Some(&sd[..]), None),
                (None, Some(&st[..])),
                (Some(&sd[..]), Some(&st[..])),
            ];
            for (qd, qt) in cases {
                let dq = qd.map(|s| drug(s.to_vec())).unwrap_or(EntityQuery::Index(u));
                let tq = qt.map(|s| target(s.to_vec())).unwrap_or(EntityQuery::Index(v));
                let got = predict_wknn(&m, &PairQuery::new(dq, tq)).unwrap();
                let want = oracle(&ds, k, eta, qd, u, qt, v);
                prop_assert!((got - want).abs() <= 1e-12, "got {got}, want {want}");
                prop_assert!((0.0..=1.0).contains(&got));
            }
        }
    }
}
