//! Queries, the predictor interface and the weighted-neighbor scoring rule
//! shared by the baseline and recovery predictors.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dataset::{QueryProfile, Side};
use crate::error::{Error, Result};
use crate::neighbors::{knn, NeighborList};

/// Inductive prediction settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    /// New drug, training target.
    S2,
    /// Training drug, new target.
    S3,
    /// New drug, new target.
    S4,
}

impl Setting {
    pub const ALL: [Setting; 3] = [Setting::S2, Setting::S3, Setting::S4];
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::S2 => "S2",
            Setting::S3 => "S3",
            Setting::S4 => "S4",
        })
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S2" => Ok(Setting::S2),
            "S3" => Ok(Setting::S3),
            "S4" => Ok(Setting::S4),
            other => Err(Error::param(format!(
                "unknown setting `{other}` (expected S2, S3 or S4)"
            ))),
        }
    }
}

/// One side of a query: either an entity of the training set or the
/// similarity profile of an unseen entity against the training set.
#[derive(Debug, Clone, PartialEq)]
pub enum EntityQuery {
    Index(usize),
    Profile(QueryProfile),
}

impl EntityQuery {
    pub fn profile(values: Vec<f64>, side: Side) -> Result<Self> {
        QueryProfile::new(values, side).map(EntityQuery::Profile)
    }

    pub fn is_index(&self) -> bool {
        matches!(self, EntityQuery::Index(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairQuery {
    pub drug: EntityQuery,
    pub target: EntityQuery,
}

impl PairQuery {
    pub fn new(drug: EntityQuery, target: EntityQuery) -> Self {
        Self { drug, target }
    }

    pub fn setting(&self) -> Result<Setting> {
        setting_of(&self.drug, &self.target)
    }
}

pub(crate) fn setting_of(drug: &EntityQuery, target: &EntityQuery) -> Result<Setting> {
    match (drug.is_index(), target.is_index()) {
        (true, true) => Err(Error::TransductiveQuery),
        (false, true) => Ok(Setting::S2),
        (true, false) => Ok(Setting::S3),
        (false, false) => Ok(Setting::S4),
    }
}

/// Neighborhood size and rank decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub eta: f64,
}

impl KnnParams {
    pub fn new(k: usize, eta: f64) -> Result<Self> {
        let p = Self { k, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::param(format!("eta = {} outside [0, 1]", self.eta)));
        }
        Ok(())
    }
}

/// A fitted model that scores drug-target pairs in the inductive settings.
pub trait Predictor: Send + Sync {
    fn n_drugs(&self) -> usize;
    fn n_targets(&self) -> usize;

    /// Scores every (drug, target) combination. Each cell's setting follows
    /// from which sides are training indices.
    fn predict_grid(&self, drugs: &[EntityQuery], targets: &[EntityQuery]) -> Result<Array2<f64>>;

    fn predict(&self, query: &PairQuery) -> Result<f64> {
        let grid = self.predict_grid(
            std::slice::from_ref(&query.drug),
            std::slice::from_ref(&query.target),
        )?;
        Ok(grid[(0, 0)])
    }
}

impl<P: Predictor + ?Sized> Predictor for Box<P> {
    fn n_drugs(&self) -> usize {
        (**self).n_drugs()
    }

    fn n_targets(&self) -> usize {
        (**self).n_targets()
    }

    fn predict_grid(&self, drugs: &[EntityQuery], targets: &[EntityQuery]) -> Result<Array2<f64>> {
        (**self).predict_grid(drugs, targets)
    }
}

pub(crate) fn check_queries(queries: &[EntityQuery], len: usize, side: Side) -> Result<()> {
    for q in queries {
        match q {
            EntityQuery::Index(i) if *i >= len => {
                return Err(Error::IndexOutOfRange { index: *i, len })
            }
            EntityQuery::Profile(p) if p.side() != side => {
                return Err(Error::param(format!(
                    "{} profile passed as a {side} query",
                    p.side()
                )))
            }
            EntityQuery::Profile(p) if p.len() != len => {
                return Err(Error::Dimension(format!(
                    "{side} profile has length {}, model has {len} training {side}s",
                    p.len()
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Decayed weights of a neighbor list: `eta^(rank * scale - 1) * s`, with
/// 1-based ranks, and their similarity total.
struct Weighted {
    index: Vec<usize>,
    weight: Vec<f64>,
    z: f64,
}

impl Weighted {
    fn new(list: &NeighborList, eta: f64, rank_scale: f64) -> Self {
        let mut index = Vec::with_capacity(list.len());
        let mut weight = Vec::with_capacity(list.len());
        for (r, nb) in list.iter().enumerate() {
            let rank = (r + 1) as f64;
            index.push(nb.index);
            weight.push(eta.powf(rank * rank_scale - 1.0) * nb.similarity);
        }
        Self {
            index,
            weight,
            z: list.total_similarity(),
        }
    }
}

/// The weighted-neighbor scoring rule, parameterized by the label matrix
/// used in each setting and the rank scales of the pair setting.
pub(crate) struct NeighborScorer<'a> {
    pub params: KnnParams,
    pub s2_labels: &'a Array2<f64>,
    pub s3_labels: &'a Array2<f64>,
    pub s4_labels: &'a Array2<f64>,
    pub drug_rank_scale: f64,
    pub target_rank_scale: f64,
}

impl NeighborScorer<'_> {
    pub fn score_grid(
        &self,
        drugs: &[EntityQuery],
        targets: &[EntityQuery],
    ) -> Result<Array2<f64>> {
        let (n, m) = self.s2_labels.dim();
        check_queries(drugs, n, Side::Drug)?;
        check_queries(targets, m, Side::Target)?;
        let KnnParams { k, eta } = self.params;

        // Neighbor lists are computed once per profile. The single-side
        // settings use unscaled ranks; the pair setting uses scaled ones.
        let lists = |qs: &[EntityQuery], scale: f64| -> Result<Vec<Option<(Weighted, Weighted)>>> {
            qs.iter()
                .map(|q| match q {
                    EntityQuery::Index(_) => Ok(None),
                    EntityQuery::Profile(p) => {
                        let nb = knn(p.values(), k, &[])?;
                        Ok(Some((
                            Weighted::new(&nb, eta, 1.0),
                            Weighted::new(&nb, eta, scale),
                        )))
                    }
                })
                .collect()
        };
        let drug_w = lists(drugs, self.drug_rank_scale)?;
        let target_w = lists(targets, self.target_rank_scale)?;

        let mut out = Array2::<f64>::zeros((drugs.len(), targets.len()));
        for (a, dq) in drugs.iter().enumerate() {
            for (b, tq) in targets.iter().enumerate() {
                out[(a, b)] = match (dq, tq, &drug_w[a], &target_w[b]) {
                    (EntityQuery::Index(_), EntityQuery::Index(_), ..) => {
                        return Err(Error::TransductiveQuery)
                    }
                    (_, EntityQuery::Index(v), Some((w, _)), _) => {
                        single_side(w, |i| self.s2_labels[(i, *v)])
                    }
                    (EntityQuery::Index(u), _, _, Some((w, _))) => {
                        single_side(w, |j| self.s3_labels[(*u, j)])
                    }
                    (_, _, Some((_, wd)), Some((_, wt))) => pair(wd, wt, self.s4_labels),
                    _ => unreachable!("profile queries always carry neighbor weights"),
                };
            }
        }
        Ok(out)
    }
}

fn single_side(w: &Weighted, label: impl Fn(usize) -> f64) -> f64 {
    if w.z <= 0.0 {
        return 0.0;
    }
    let num: f64 = w
        .index
        .iter()
        .zip(&w.weight)
        .map(|(&i, &wt)| wt * label(i))
        .sum();
    num / w.z
}

fn pair(wd: &Weighted, wt: &Weighted, labels: &Array2<f64>) -> f64 {
    let z = wd.z * wt.z;
    if z <= 0.0 {
        return 0.0;
    }
    let mut num = 0.0;
    for (&i, &a) in wd.index.iter().zip(&wd.weight) {
        for (&j, &b) in wt.index.iter().zip(&wt.weight) {
            num += a * b * labels[(i, j)];
        }
    }
    num / z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setting_parse_and_classify() {
        assert_eq!("s4".parse::<Setting>().unwrap(), Setting::S4);
        assert!("S9".parse::<Setting>().is_err());
        let p = EntityQuery::profile(vec![0.5], Side::Drug).unwrap();
        let t = EntityQuery::profile(vec![0.5], Side::Target).unwrap();
        assert_eq!(setting_of(&p, &EntityQuery::Index(0)).unwrap(), Setting::S2);
        assert_eq!(setting_of(&EntityQuery::Index(0), &t).unwrap(), Setting::S3);
        assert_eq!(setting_of(&p, &t).unwrap(), Setting::S4);
        assert!(matches!(
            setting_of(&EntityQuery::Index(0), &EntityQuery::Index(0)),
            Err(Error::TransductiveQuery)
        ));
    }

    #[test]
    fn params_range() {
        assert!(KnnParams::new(0, 0.5).is_err());
        assert!(KnnParams::new(2, 1.2).is_err());
        assert!(KnnParams::new(2, 0.0).is_ok());
    }
}
