//! Exact k-nearest-neighbor retrieval over similarity vectors.

use std::cmp::Ordering;

use crate::dataset::QueryProfile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub similarity: f64,
}

/// Neighbors sorted by similarity descending, ties by ascending index. The
/// 1-based position in the list is the neighbor's rank.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeighborList {
    entries: Vec<Neighbor>,
}

impl NeighborList {
    pub fn entries(&self) -> &[Neighbor] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Neighbor> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|n| n.index)
    }

    /// Sum of neighbor similarities.
    pub fn total_similarity(&self) -> f64 {
        self.entries.iter().map(|n| n.similarity).sum()
    }
}

impl<'a> IntoIterator for &'a NeighborList {
    type Item = &'a Neighbor;
    type IntoIter = std::slice::Iter<'a, Neighbor>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

#[inline]
fn rank_order(a: &Neighbor, b: &Neighbor) -> Ordering {
    b.similarity
        .total_cmp(&a.similarity)
        .then(a.index.cmp(&b.index))
}

/// The `k` most similar entries of `sims`, skipping indices in `exclude`.
///
/// Returns `min(k, |sims| - |exclude|)` neighbors. Zero-similarity entries
/// are kept.
pub fn knn(sims: &[f64], k: usize, exclude: &[usize]) -> Result<NeighborList> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let mut candidates: Vec<Neighbor> = sims
        .iter()
        .enumerate()
        .filter(|(i, _)| !exclude.contains(i))
        .map(|(index, &similarity)| Neighbor { index, similarity })
        .collect();
    if candidates.is_empty() {
        return Err(Error::NothingSelectable {
            candidates: sims.len(),
            excluded: sims.len(),
        });
    }
    if candidates.len() > k {
        candidates.select_nth_unstable_by(k - 1, rank_order);
        candidates.truncate(k);
    }
    candidates.sort_unstable_by(rank_order);
    Ok(NeighborList {
        entries: candidates,
    })
}

/// Keeps the entries of `sims` at `subset`, in subset order.
pub fn project(sims: &QueryProfile, subset: &[usize]) -> Result<QueryProfile> {
    let values = project_values(sims.values(), subset)?;
    QueryProfile::new(values, sims.side())
}

pub(crate) fn project_values(sims: &[f64], subset: &[usize]) -> Result<Vec<f64>> {
    subset
        .iter()
        .map(|&i| {
            sims.get(i).copied().ok_or(Error::IndexOutOfRange {
                index: i,
                len: sims.len(),
            })
        })
        .collect()
}
