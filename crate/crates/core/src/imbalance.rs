//! Local imbalance: how often an entity's nearest same-side neighbors
//! disagree with its own label for a given opposite entity.
//!
//! For a drug `i` and target `j`, `C^d(i, j)` is the fraction of the `k`
//! nearest drugs of `i` whose interaction with `j` differs from `Y(i, j)`.
//! `C^t(i, j)` is the same over the nearest targets of `j`. Averaging over
//! the known interactions gives the dataset-level `LI^d` and `LI^t`; summing
//! per entity gives the importances used by local-imbalance sampling.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dataset::{DtiDataset, Side, SimilarityMatrix};
use crate::error::{Error, Result};
use crate::neighbors::{knn, NeighborList};

/// Whether an entity may appear in its own neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborConvention {
    #[default]
    ExcludeSelf,
    IncludeSelf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceReport {
    pub li_drug: f64,
    pub li_target: f64,
    pub drug_importance: Vec<f64>,
    pub target_importance: Vec<f64>,
    pub k: usize,
}

fn check_k(k: usize, len: usize, side: Side, convention: NeighborConvention) -> Result<()> {
    let max = match convention {
        NeighborConvention::ExcludeSelf => len.saturating_sub(1),
        NeighborConvention::IncludeSelf => len,
    };
    if k == 0 || k > max {
        return Err(Error::param(format!(
            "k = {k} must lie in [1, {max}] on the {side} side"
        )));
    }
    Ok(())
}

/// Neighborhood of every training entity of one side.
pub(crate) fn side_neighbors(
    sim: &SimilarityMatrix,
    k: usize,
    convention: NeighborConvention,
) -> Result<Vec<NeighborList>> {
    (0..sim.len())
        .map(|a| {
            let row = sim.row(a).to_vec();
            match convention {
                NeighborConvention::ExcludeSelf => knn(&row, k, &[a]),
                NeighborConvention::IncludeSelf => knn(&row, k, &[]),
            }
        })
        .collect()
}

/// `C^d` (drug side) or `C^t` (target side) for every pair, n × m.
fn imbalance_matrix(
    ds: &DtiDataset,
    side: Side,
    k: usize,
    convention: NeighborConvention,
) -> Result<Array2<f64>> {
    let y = ds.interactions();
    let nb = side_neighbors(ds.similarity(side), k, convention)?;
    Ok(Array2::from_shape_fn(
        (ds.n_drugs(), ds.n_targets()),
        |(i, j)| {
            let own = y.get(i, j);
            let disagree = match side {
                Side::Drug => nb[i].indices().filter(|&h| y.get(h, j) != own).count(),
                Side::Target => nb[j].indices().filter(|&h| y.get(i, h) != own).count(),
            };
            disagree as f64 / k as f64
        },
    ))
}

/// Mean of `C` over the known interactions.
fn side_local_imbalance(
    ds: &DtiDataset,
    side: Side,
    k: usize,
    convention: NeighborConvention,
) -> Result<f64> {
    let total = ds.interactions().count_ones();
    if total == 0 {
        return Err(Error::NoInteractions);
    }
    let c = imbalance_matrix(ds, side, k, convention)?;
    let sum: f64 = ds
        .interactions()
        .view()
        .indexed_iter()
        .filter(|(_, &v)| v == 1)
        .map(|(idx, _)| c[idx])
        .sum();
    Ok(sum / total as f64)
}

pub fn pair_local_imbalance(
    ds: &DtiDataset,
    i: usize,
    j: usize,
    k: usize,
    side: Side,
) -> Result<f64> {
    pair_local_imbalance_with(ds, i, j, k, side, NeighborConvention::default())
}

pub fn pair_local_imbalance_with(
    ds: &DtiDataset,
    i: usize,
    j: usize,
    k: usize,
    side: Side,
    convention: NeighborConvention,
) -> Result<f64> {
    let (n, m) = (ds.n_drugs(), ds.n_targets());
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    if j >= m {
        return Err(Error::IndexOutOfRange { index: j, len: m });
    }
    let y = ds.interactions();
    let own = y.get(i, j);
    let (sims, own_idx, len) = match side {
        Side::Drug => (ds.drug_sim().row(i).to_vec(), i, n),
        Side::Target => (ds.target_sim().row(j).to_vec(), j, m),
    };
    check_k(k, len, side, convention)?;
    let exclude: &[usize] = match convention {
        NeighborConvention::ExcludeSelf => &[own_idx],
        NeighborConvention::IncludeSelf => &[],
    };
    let nb = knn(&sims, k, exclude)?;
    let disagree = nb
        .indices()
        .filter(|&h| match side {
            Side::Drug => y.get(h, j) != own,
            Side::Target => y.get(i, h) != own,
        })
        .count();
    Ok(disagree as f64 / k as f64)
}

/// `(LI^d, LI^t)`: local imbalance averaged over the known interactions.
pub fn dataset_local_imbalance(ds: &DtiDataset, k: usize) -> Result<(f64, f64)> {
    dataset_local_imbalance_with(ds, k, NeighborConvention::default())
}

pub fn dataset_local_imbalance_with(
    ds: &DtiDataset,
    k: usize,
    convention: NeighborConvention,
) -> Result<(f64, f64)> {
    check_k(k, ds.n_drugs(), Side::Drug, convention)?;
    check_k(k, ds.n_targets(), Side::Target, convention)?;
    Ok((
        side_local_imbalance(ds, Side::Drug, k, convention)?,
        side_local_imbalance(ds, Side::Target, k, convention)?,
    ))
}

/// Dataset-level imbalance with the neighborhood capped at the number of
/// other entities on each side. A side with a single entity has no
/// neighbors and reports 0.
pub(crate) fn capped_local_imbalance(ds: &DtiDataset, k: usize) -> Result<(f64, f64)> {
    let side_li = |side: Side, len: usize| -> Result<f64> {
        match k.min(len.saturating_sub(1)) {
            0 => Ok(0.0),
            k_eff => side_local_imbalance(ds, side, k_eff, NeighborConvention::ExcludeSelf),
        }
    };
    Ok((
        side_li(Side::Drug, ds.n_drugs())?,
        side_li(Side::Target, ds.n_targets())?,
    ))
}

/// Per-entity importance: the sum of `C` over the entity's known
/// interactions.
pub fn entity_importance(ds: &DtiDataset, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let convention = NeighborConvention::default();
    check_k(k, ds.n_drugs(), Side::Drug, convention)?;
    check_k(k, ds.n_targets(), Side::Target, convention)?;
    let c_drug = imbalance_matrix(ds, Side::Drug, k, convention)?;
    let c_target = imbalance_matrix(ds, Side::Target, k, convention)?;
    let y = ds.interactions();
    let mut drug = vec![0.0; ds.n_drugs()];
    let mut target = vec![0.0; ds.n_targets()];
    for ((i, j), &v) in y.view().indexed_iter() {
        if v == 1 {
            drug[i] += c_drug[(i, j)];
            target[j] += c_target[(i, j)];
        }
    }
    Ok((drug, target))
}

pub fn imbalance_report(ds: &DtiDataset, k: usize) -> Result<ImbalanceReport> {
    let (li_drug, li_target) = dataset_local_imbalance(ds, k)?;
    let (drug_importance, target_importance) = entity_importance(ds, k)?;
    Ok(ImbalanceReport {
        li_drug,
        li_target,
        drug_importance,
        target_importance,
        k,
    })
}
