//! Weighted kNN with interaction recovery.
//!
//! Before prediction the binary interaction matrix is completed three ways:
//! row-wise from neighboring drugs (`Y^d`), column-wise from neighboring
//! targets (`Y^t`) and as an imbalance-weighted blend of the two (`Y^dt`).
//! Each is then raised element-wise to at least `Y` so known interactions
//! stay at 1. New drugs are scored against `Y^t`, new targets against `Y^d`
//! and new pairs against `Y^dt`, where the pair setting also rescales the
//! neighbor ranks by the imbalance ratios `r_d` and `r_t`.

use std::sync::Arc;

use ndarray::{Array2, Zip};

use crate::dataset::{DtiDataset, Side};
use crate::error::Result;
use crate::imbalance::{capped_local_imbalance, side_neighbors, NeighborConvention};
use crate::model::{EntityQuery, KnnParams, NeighborScorer, PairQuery, Predictor};

/// Lower bound applied to both imbalance values before taking their ratio.
pub const LI_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoverySet {
    pub y_drug: Array2<f64>,
    pub y_target: Array2<f64>,
    pub y_joint: Array2<f64>,
    pub li_drug: f64,
    pub li_target: f64,
}

impl RecoverySet {
    /// The unrecovered matrix in all three slots.
    pub fn identity(ds: &DtiDataset, li_drug: f64, li_target: f64) -> Self {
        let y = ds.interactions().to_f64();
        Self {
            y_drug: y.clone(),
            y_target: y.clone(),
            y_joint: y,
            li_drug,
            li_target,
        }
    }
}

/// Weighted average of neighbor rows (drug side) or neighbor columns
/// (target side). Entities without neighbors, or whose neighbors all have
/// zero similarity, keep their own row or column.
fn recover_side(ds: &DtiDataset, side: Side, params: KnnParams) -> Result<Array2<f64>> {
    let y = ds.interactions().to_f64();
    let sim = ds.similarity(side);
    let len = sim.len();
    let k = params.k.min(len.saturating_sub(1));
    if k == 0 {
        return Ok(y);
    }
    let neighbors = side_neighbors(sim, k, NeighborConvention::ExcludeSelf)?;
    let mut out = y.clone();
    for (a, nb) in neighbors.iter().enumerate() {
        let z = nb.total_similarity();
        if z <= 0.0 {
            continue;
        }
        let mut acc = match side {
            Side::Drug => ndarray::Array1::<f64>::zeros(y.ncols()),
            Side::Target => ndarray::Array1::<f64>::zeros(y.nrows()),
        };
        for (r, n) in nb.iter().enumerate() {
            let w = params.eta.powi(r as i32) * n.similarity;
            match side {
                Side::Drug => acc.scaled_add(w, &y.row(n.index)),
                Side::Target => acc.scaled_add(w, &y.column(n.index)),
            }
        }
        acc /= z;
        match side {
            Side::Drug => out.row_mut(a).assign(&acc),
            Side::Target => out.column_mut(a).assign(&acc),
        }
    }
    Ok(out)
}

pub fn build_recovery(ds: &DtiDataset, k: usize, eta: f64) -> Result<RecoverySet> {
    let params = KnnParams::new(k, eta)?;
    let y = ds.interactions().to_f64();
    let raw_drug = recover_side(ds, Side::Drug, params)?;
    let raw_target = recover_side(ds, Side::Target, params)?;
    let (li_drug, li_target) = if ds.interactions().count_ones() == 0 {
        (0.0, 0.0)
    } else {
        capped_local_imbalance(ds, k)?
    };

    let mut y_joint = Array2::<f64>::zeros(y.dim());
    Zip::from(&mut y_joint)
        .and(&raw_drug)
        .and(&raw_target)
        .and(&y)
        .for_each(|out, &d, &t, &known| {
            *out = (((1.0 - li_drug) * d + (1.0 - li_target) * t) / 2.0).max(known);
        });
    let correct = |mut m: Array2<f64>| {
        Zip::from(&mut m)
            .and(&y)
            .for_each(|v, &known| *v = v.max(known));
        m
    };
    Ok(RecoverySet {
        y_drug: correct(raw_drug),
        y_target: correct(raw_target),
        y_joint,
        li_drug,
        li_target,
    })
}

/// `(r_d, r_t)` from the two imbalance values; at least one of them is 1.
pub fn imbalance_ratios(li_drug: f64, li_target: f64) -> (f64, f64) {
    let d = li_drug.max(LI_FLOOR);
    let t = li_target.max(LI_FLOOR);
    ((d / t).min(1.0), (t / d).min(1.0))
}

#[derive(Debug, Clone)]
pub struct WkNNIRModel {
    dataset: Arc<DtiDataset>,
    params: KnnParams,
    recovery: RecoverySet,
    r_drug: f64,
    r_target: f64,
}

impl WkNNIRModel {
    pub fn fit(dataset: impl Into<Arc<DtiDataset>>, params: KnnParams) -> Result<Self> {
        params.validate()?;
        let dataset = dataset.into();
        let recovery = build_recovery(&dataset, params.k, params.eta)?;
        let (r_drug, r_target) = imbalance_ratios(recovery.li_drug, recovery.li_target);
        Ok(Self {
            dataset,
            params,
            recovery,
            r_drug,
            r_target,
        })
    }

    /// Assembles a model from an explicit recovery set and ratios.
    pub fn with_recovery(
        dataset: impl Into<Arc<DtiDataset>>,
        params: KnnParams,
        recovery: RecoverySet,
        r_drug: f64,
        r_target: f64,
    ) -> Result<Self> {
        params.validate()?;
        let dataset = dataset.into();
        let dim = (dataset.n_drugs(), dataset.n_targets());
        for m in [&recovery.y_drug, &recovery.y_target, &recovery.y_joint] {
            if m.dim() != dim {
                return Err(crate::Error::Dimension(format!(
                    "recovered matrix is {:?}, dataset is {dim:?}",
                    m.dim()
                )));
            }
        }
        for r in [r_drug, r_target] {
            if !(r > 0.0 && r <= 1.0) {
                return Err(crate::Error::param(format!("ratio {r} outside (0, 1]")));
            }
        }
        Ok(Self {
            dataset,
            params,
            recovery,
            r_drug,
            r_target,
        })
    }

    pub fn params(&self) -> KnnParams {
        self.params
    }

    pub fn recovery(&self) -> &RecoverySet {
        &self.recovery
    }

    pub fn ratios(&self) -> (f64, f64) {
        (self.r_drug, self.r_target)
    }

    pub fn dataset(&self) -> &DtiDataset {
        &self.dataset
    }
}

pub fn fit_wknnir(dataset: impl Into<Arc<DtiDataset>>, k: usize, eta: f64) -> Result<WkNNIRModel> {
    WkNNIRModel::fit(dataset, KnnParams { k, eta })
}

pub fn predict_wknnir(model: &WkNNIRModel, query: &PairQuery) -> Result<f64> {
    model.predict(query)
}

impl Predictor for WkNNIRModel {
    fn n_drugs(&self) -> usize {
        self.dataset.n_drugs()
    }

    fn n_targets(&self) -> usize {
        self.dataset.n_targets()
    }

    fn predict_grid(&self, drugs: &[EntityQuery], targets: &[EntityQuery]) -> Result<Array2<f64>> {
        NeighborScorer {
            params: self.params,
            s2_labels: &self.recovery.y_target,
            s3_labels: &self.recovery.y_drug,
            s4_labels: &self.recovery.y_joint,
            drug_rank_scale: 1.0 / self.r_drug,
            target_rank_scale: 1.0 / self.r_target,
        }
        .score_grid(drugs, targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::f1;
    use crate::synthetic::{generate, SyntheticConfig};
    use crate::wknn::fit_wknn;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn f1_drug_recovery_row() {
        let rec = build_recovery(&f1(), 1, 0.5).unwrap();
        assert_eq!(rec.y_drug.row(0).to_vec(), vec![1.0, 1.0]);
        // target side: each target's only neighbor is the other one
        assert_eq!(rec.y_target.column(1).to_vec(), vec![1.0, 1.0, 1.0]);
        assert_eq!(rec.li_drug, 0.75);
    }

    #[test]
    fn all_ones_is_fixed_point() {
        let ds = DtiDataset::from_matrices(
            array![[1.0, 0.3], [0.3, 1.0]],
            array![[1.0, 0.5], [0.5, 1.0]],
            array![[1, 1], [1, 1]],
        )
        .unwrap();
        let rec = build_recovery(&ds, 1, 0.7).unwrap();
        let y = ds.interactions().to_f64();
        assert_eq!(rec.y_drug, y);
        assert_eq!(rec.y_target, y);
        assert_eq!(rec.y_joint, y);
    }

    #[test]
    fn zero_similarity_row_keeps_original() {
        let ds = DtiDataset::from_matrices(
            array![[1.0, 0.0], [0.0, 1.0]],
            array![[1.0, 0.5], [0.5, 1.0]],
            array![[1, 0], [0, 1]],
        )
        .unwrap();
        let rec = build_recovery(&ds, 1, 1.0).unwrap();
        assert_eq!(rec.y_drug, ds.interactions().to_f64());
    }

    #[test]
    fn ratios() {
        assert_eq!(imbalance_ratios(0.4, 0.4), (1.0, 1.0));
        let (rd, rt) = imbalance_ratios(0.658, 0.764);
        assert!((rd - 0.658 / 0.764).abs() < 1e-12);
        assert_eq!(rt, 1.0);
        let (rd, rt) = imbalance_ratios(0.5, 0.0);
        assert_eq!(rd, 1.0);
        assert!((rt - LI_FLOOR / 0.5).abs() < 1e-18);
    }

    #[test]
    fn f1_new_drug_uses_target_recovery() {
        let m = fit_wknnir(f1(), 1, 0.5).unwrap();
        let q = PairQuery::new(
            EntityQuery::profile(vec![0.8, 0.4, 0.0], Side::Drug).unwrap(),
            EntityQuery::Index(1),
        );
        assert_eq!(predict_wknnir(&m, &q).unwrap(), 1.0);
    }

    #[test]
    fn zero_pair_profile_scores_zero() {
        let m = fit_wknnir(f1(), 2, 0.5).unwrap();
        let q = PairQuery::new(
            EntityQuery::profile(vec![0.0; 3], Side::Drug).unwrap(),
            EntityQuery::profile(vec![0.3, 0.9], Side::Target).unwrap(),
        );
        assert_eq!(predict_wknnir(&m, &q).unwrap(), 0.0);
    }

    fn random_queries(sd: &[f64], st: &[f64], u: usize, v: usize) -> Vec<PairQuery> {
        let d = EntityQuery::profile(sd.to_vec(), Side::Drug).unwrap();
        let t = EntityQuery::profile(st.to_vec(), Side::Target).unwrap();
        vec![
            PairQuery::new(d.clone(), EntityQuery::Index(v)),
            PairQuery::new(EntityQuery::Index(u), t.clone()),
            PairQuery::new(d, t),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn recovery_dominates_and_reduces(
            seed in any::<u64>(),
            k in 1usize..8,
            eta_tenths in 0u32..=10,
            sd in prop::collection::vec(0.0f64..=1.0, 9),
            st in prop::collection::vec(0.0f64..=1.0, 7),
            u in 0usize..9,
            v in 0usize..7,
        ) {
            let eta = eta_tenths as f64 / 10.0;
            let ds = generate(&SyntheticConfig { n_drugs: 9, n_targets: 7, seed, ..Default::default() }).unwrap();
            let params = KnnParams::new(k, eta).unwrap();
            let model = WkNNIRModel::fit(ds.clone(), params).unwrap();
            let rec = model.recovery();
            let y = ds.interactions().to_f64();
            for m in [&rec.y_drug, &rec.y_target, &rec.y_joint] {
                Zip::from(m).and(&y).for_each(|&r, &known| {
                    assert!(r >= known && (0.0..=1.0).contains(&r));
                    if known == 1.0 { assert_eq!(r, 1.0); }
                });
            }

            let base = fit_wknn(ds.clone(), k, eta).unwrap();
            let (rd, rt) = model.ratios();
            // same ratios, raw labels: lower bound for the recovered model
            let unrecovered = WkNNIRModel::with_recovery(
                ds.clone(), params, RecoverySet::identity(&ds, rec.li_drug, rec.li_target), rd, rt,
            ).unwrap();
            // identity recovery with unit ratios: the baseline exactly
            let reduced = WkNNIRModel::with_recovery(
                ds.clone(), params, RecoverySet::identity(&ds, 0.5, 0.5), 1.0, 1.0,
            ).unwrap();
            for q in random_queries(&sd, &st, u, v) {
                let full = model.predict(&q).unwrap();
                prop_assert!((0.0..=1.0).contains(&full));
                prop_assert!(full + 1e-12 >= unrecovered.predict(&q).unwrap());
                prop_assert!((reduced.predict(&q).unwrap() - base.predict(&q).unwrap()).abs() <= 1e-12);
            }
        }
    }
}
