//! Bagging-style ensembles over sampled drug and target subsets.
//!
//! Each member is fitted on the sub-dataset spanned by a weighted sample of
//! drugs and a weighted sample of targets, drawn without replacement. At
//! prediction time members that never saw the known entity of a new-drug or
//! new-target query are dropped, query profiles are projected onto each
//! member's subsets, and the remaining member scores are averaged.

use std::sync::Arc;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{DtiDataset, QueryProfile, Side};
use crate::error::{Error, Result};
use crate::imbalance::entity_importance;
use crate::model::{check_queries, EntityQuery, Predictor};
use crate::neighbors::project_values;

/// How entity sampling probabilities are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingKind {
    /// Every entity equally likely.
    Uniform,
    /// Proportional to the entity's interaction count.
    Global,
    /// Proportional to the entity's local-imbalance importance.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingStrategy {
    pub kind: SamplingKind,
    /// Additive smoothing for global and local sampling.
    pub sigma: f64,
    /// Neighborhood size of the importance scores (local sampling only).
    pub k: usize,
}

impl SamplingStrategy {
    pub const DEFAULT_SIGMA: f64 = 0.1;
    pub const DEFAULT_K: usize = 5;

    pub fn uniform() -> Self {
        Self {
            kind: SamplingKind::Uniform,
            sigma: Self::DEFAULT_SIGMA,
            k: Self::DEFAULT_K,
        }
    }

    pub fn global(sigma: f64) -> Self {
        Self {
            kind: SamplingKind::Global,
            sigma,
            k: Self::DEFAULT_K,
        }
    }

    pub fn local(sigma: f64, k: usize) -> Self {
        Self {
            kind: SamplingKind::Local,
            sigma,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::param(format!("sigma = {} must be >= 0", self.sigma)));
        }
        if self.kind == SamplingKind::Local && self.k == 0 {
            return Err(Error::param("local sampling needs k >= 1"));
        }
        Ok(())
    }
}

fn smoothed(weights: &[f64], sigma: f64) -> Vec<f64> {
    let total: f64 = weights.iter().sum::<f64>() + sigma * weights.len() as f64;
    if total <= 0.0 {
        // nothing to be proportional to
        return vec![1.0 / weights.len() as f64; weights.len()];
    }
    weights.iter().map(|w| (sigma + w) / total).collect()
}

/// Drug and target sampling probabilities; each vector sums to 1.
pub fn sampling_probabilities(
    ds: &DtiDataset,
    strategy: &SamplingStrategy,
) -> Result<(Vec<f64>, Vec<f64>)> {
    strategy.validate()?;
    let (n, m) = (ds.n_drugs(), ds.n_targets());
    Ok(match strategy.kind {
        SamplingKind::Uniform => (vec![1.0 / n as f64; n], vec![1.0 / m as f64; m]),
        SamplingKind::Global => {
            let to_f = |v: Vec<usize>| v.into_iter().map(|c| c as f64).collect::<Vec<_>>();
            let rows = to_f(ds.interactions().row_sums());
            let cols = to_f(ds.interactions().col_sums());
            (
                smoothed(&rows, strategy.sigma),
                smoothed(&cols, strategy.sigma),
            )
        }
        SamplingKind::Local => {
            let (drug, target) = entity_importance(ds, strategy.k)?;
            (
                smoothed(&drug, strategy.sigma),
                smoothed(&target, strategy.sigma),
            )
        }
    })
}

/// Sequential weighted draws: each step picks one remaining index with
/// probability proportional to its weight, then removes it.
pub fn sample_without_replacement<R: Rng + ?Sized>(
    probs: &[f64],
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if count == 0 || count > probs.len() {
        return Err(Error::param(format!(
            "sample size {count} must lie in [1, {}]",
            probs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        return Err(Error::param(format!("invalid sampling weight {p}")));
    }
    let support = probs.iter().filter(|&&p| p > 0.0).count();
    if support < count {
        return Err(Error::InsufficientSupport {
            requested: count,
            support,
        });
    }
    let mut weights = probs.to_vec();
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = weights.iter().sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut choice = None;
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            choice = Some(i);
            if target < acc {
                break;
            }
        }
        let i = choice.expect("support checked above");
        weights[i] = 0.0;
        picked.push(i);
    }
    Ok(picked)
}

pub fn sample_without_replacement_seeded(
    probs: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    sample_without_replacement(probs, count, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `round(len * ratio)` clamped to `[1, len]`.
pub fn subset_size(len: usize, ratio: f64) -> usize {
    ((len as f64 * ratio).round() as usize).clamp(1, len)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Number of members.
    pub q: usize,
    /// Fraction of drugs and targets sampled for each member.
    pub ratio: f64,
    pub strategy: SamplingStrategy,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(strategy: SamplingStrategy) -> Self {
        Self {
            q: 30,
            ratio: 0.95,
            strategy,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 {
            return Err(Error::param("ensemble size q must be at least 1"));
        }
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(Error::param(format!(
                "ratio = {} outside (0, 1]",
                self.ratio
            )));
        }
        self.strategy.validate()
    }
}

#[derive(Debug, Clone)]
pub struct Member<M> {
    pub model: M,
    pub drugs: Vec<usize>,
    pub targets: Vec<usize>,
    drug_pos: Vec<Option<usize>>,
    target_pos: Vec<Option<usize>>,
}

fn positions(subset: &[usize], len: usize) -> Vec<Option<usize>> {
    let mut pos = vec![None; len];
    for (p, &i) in subset.iter().enumerate() {
        pos[i] = Some(p);
    }
    pos
}

/// Query rows and columns a member is eligible for, with its scores there.
type MemberBlock = (Vec<usize>, Vec<usize>, Array2<f64>);

#[derive(Debug, Clone)]
pub struct EnsembleModel<M> {
    members: Vec<Member<M>>,
    training: Arc<DtiDataset>,
}

/// Trains `config.q` members, member `i` (1-based) drawing its subsets from
/// a generator seeded with `config.seed + i`.
pub fn train_ensemble<M, F>(
    dataset: impl Into<Arc<DtiDataset>>,
    factory: F,
    config: &EnsembleConfig,
) -> Result<EnsembleModel<M>>
where
    M: Predictor,
    F: Fn(DtiDataset) -> Result<M> + Sync,
{
    config.validate()?;
    let training: Arc<DtiDataset> = dataset.into();
    let (n, m) = (training.n_drugs(), training.n_targets());
    let (p_drug, p_target) = sampling_probabilities(&training, &config.strategy)?;
    let (n_sub, m_sub) = (subset_size(n, config.ratio), subset_size(m, config.ratio));

    let members = (1..=config.q as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i));
            let drugs = sample_without_replacement(&p_drug, n_sub, &mut rng)?;
            let targets = sample_without_replacement(&p_target, m_sub, &mut rng)?;
            let model = factory(training.subset(&drugs, &targets)?)?;
            Ok(Member {
                model,
                drug_pos: positions(&drugs, n),
                target_pos: positions(&targets, m),
                drugs,
                targets,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleModel { members, training })
}

impl<M: Predictor> EnsembleModel<M> {
    pub fn members(&self) -> &[Member<M>] {
        &self.members
    }

    pub fn training(&self) -> &DtiDataset {
        &self.training
    }

    /// Scores of one member over the cells it is eligible for, or `None`
    /// when it is eligible for none.
    fn member_grid(
        &self,
        member: &Member<M>,
        drugs: &[EntityQuery],
        targets: &[EntityQuery],
    ) -> Result<Option<MemberBlock>> {
        let local = |q: &EntityQuery,
                     pos: &[Option<usize>],
                     subset: &[usize]|
         -> Result<Option<EntityQuery>> {
            Ok(match q {
                EntityQuery::Index(i) => pos[*i].map(EntityQuery::Index),
                EntityQuery::Profile(p) => Some(EntityQuery::Profile(QueryProfile::new(
                    project_values(p.values(), subset)?,
                    p.side(),
                )?)),
            })
        };
        let mut rows = Vec::new();
        let mut row_q = Vec::new();
        for (a, q) in drugs.iter().enumerate() {
            if let Some(lq) = local(q, &member.drug_pos, &member.drugs)? {
                rows.push(a);
                row_q.push(lq);
            }
        }
        let mut cols = Vec::new();
        let mut col_q = Vec::new();
        for (b, q) in targets.iter().enumerate() {
            if let Some(lq) = local(q, &member.target_pos, &member.targets)? {
                cols.push(b);
                col_q.push(lq);
            }
        }
        if rows.is_empty() || cols.is_empty() {
            return Ok(None);
        }
        let grid = member.model.predict_grid(&row_q, &col_q)?;
        Ok(Some((rows, cols, grid)))
    }

    /// A training entity unknown to every member is presented to them as a
    /// new entity with its training similarity profile.
    fn as_profile(&self, q: &EntityQuery, side: Side) -> Result<EntityQuery> {
        match q {
            EntityQuery::Index(i) => {
                let sim = self.training.similarity(side);
                let all: Vec<usize> = (0..sim.len()).collect();
                EntityQuery::profile(sim.profile(*i, &all), side)
            }
            p => Ok(p.clone()),
        }
    }
}

impl<M: Predictor> Predictor for EnsembleModel<M> {
    fn n_drugs(&self) -> usize {
        self.training.n_drugs()
    }

    fn n_targets(&self) -> usize {
        self.training.n_targets()
    }

    fn predict_grid(&self, drugs: &[EntityQuery], targets: &[EntityQuery]) -> Result<Array2<f64>> {
        check_queries(drugs, self.n_drugs(), Side::Drug)?;
        check_queries(targets, self.n_targets(), Side::Target)?;
        if drugs.iter().any(EntityQuery::is_index) && targets.iter().any(EntityQuery::is_index) {
            return Err(Error::TransductiveQuery);
        }
        let partial = self
            .members
            .par_iter()
            .map(|mb| self.member_grid(mb, drugs, targets))
            .collect::<Result<Vec<_>>>()?;

        let mut sum = Array2::<f64>::zeros((drugs.len(), targets.len()));
        let mut count = Array2::<u32>::zeros((drugs.len(), targets.len()));
        for (rows, cols, grid) in partial.into_iter().flatten() {
            for (ra, &a) in rows.iter().enumerate() {
                for (cb, &b) in cols.iter().enumerate() {
                    sum[(a, b)] += grid[(ra, cb)];
                    count[(a, b)] += 1;
                }
            }
        }

        for ((a, b), c) in count.indexed_iter() {
            if *c > 0 {
                sum[(a, b)] /= *c as f64;
                continue;
            }
            // every member was dropped: fall back to all of them
            let d = [self.as_profile(&drugs[a], Side::Drug)?];
            let t = [self.as_profile(&targets[b], Side::Target)?];
            let mut total = 0.0;
            for mb in &self.members {
                let (_, _, g) = self
                    .member_grid(mb, &d, &t)?
                    .expect("profiles are eligible for every member");
                total += g[(0, 0)];
            }
            sum[(a, b)] = total / self.members.len() as f64;
        }
        Ok(sum)
    }
}
