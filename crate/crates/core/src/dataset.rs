//! Canonical data model: interaction matrix, similarity matrices and the
//! dataset that binds them together.
//!
//! In memory the interaction matrix is always drugs × targets.

use std::collections::HashSet;
use std::fmt;

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imbalance;

/// Tolerance on the unit diagonal of a similarity matrix.
pub const DIAGONAL_TOLERANCE: f64 = 1e-9;
/// Tolerance under which a similarity matrix is considered symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Drug,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Drug => f.write_str("drug"),
            Side::Target => f.write_str("target"),
        }
    }
}

/// Binary drug × target matrix of known interactions.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    values: Array2<u8>,
}

impl InteractionMatrix {
    pub fn new(values: Array2<u8>) -> Result<Self> {
        let (n, m) = values.dim();
        if n == 0 || m == 0 {
            return Err(Error::Dimension(format!(
                "interaction matrix must be at least 1x1, got {n}x{m}"
            )));
        }
        if let Some(((row, col), &v)) = values.indexed_iter().find(|(_, &v)| v > 1) {
            return Err(Error::NonBinaryInteraction {
                row,
                col,
                value: v as f64,
            });
        }
        Ok(Self { values })
    }

    /// Builds the matrix from real-valued cells, rejecting anything that is
    /// not exactly 0 or 1.
    pub fn from_f64(values: &Array2<f64>) -> Result<Self> {
        let mut out = Array2::<u8>::zeros(values.dim());
        for ((row, col), &v) in values.indexed_iter() {
            out[(row, col)] = if v == 0.0 {
                0
            } else if v == 1.0 {
                1
            } else {
                return Err(Error::NonBinaryInteraction { row, col, value: v });
            };
        }
        Self::new(out)
    }

    pub fn n_drugs(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_targets(&self) -> usize {
        self.values.ncols()
    }

    #[inline]
    pub fn get(&self, drug: usize, target: usize) -> u8 {
        self.values[(drug, target)]
    }

    pub fn view(&self) -> ArrayView2<'_, u8> {
        self.values.view()
    }

    pub fn count_ones(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }

    pub fn to_f64(&self) -> Array2<f64> {
        self.values.mapv(f64::from)
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.values
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|&v| v as usize).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        self.values
            .columns()
            .into_iter()
            .map(|c| c.iter().map(|&v| v as usize).sum())
            .collect()
    }

    pub fn select(&self, drugs: &[usize], targets: &[usize]) -> Self {
        let values = Array2::from_shape_fn((drugs.len(), targets.len()), |(a, b)| {
            self.values[(drugs[a], targets[b])]
        });
        Self { values }
    }
}

/// Square similarity matrix for one side of the bipartite network.
///
/// Only the shape is checked on construction; value-range, unit-diagonal
/// and symmetry checks are reported by [`validate_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    values: Array2<f64>,
    side: Side,
}

impl SimilarityMatrix {
    pub fn new(values: Array2<f64>, side: Side) -> Result<Self> {
        let (r, c) = values.dim();
        if r != c {
            return Err(Error::Dimension(format!(
                "{side} similarity matrix must be square, got {r}x{c}"
            )));
        }
        if r == 0 {
            return Err(Error::Dimension(format!(
                "{side} similarity matrix is empty"
            )));
        }
        Ok(Self { values, side })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[(a, b)]
    }

    pub fn row(&self, a: usize) -> ArrayView1<'_, f64> {
        self.values.row(a)
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn select(&self, idx: &[usize]) -> Self {
        let values = Array2::from_shape_fn((idx.len(), idx.len()), |(a, b)| {
            self.values[(idx[a], idx[b])]
        });
        Self {
            values,
            side: self.side,
        }
    }

    /// Similarities of entity `a` to the entities listed in `cols`.
    pub fn profile(&self, a: usize, cols: &[usize]) -> Vec<f64> {
        cols.iter().map(|&b| self.values[(a, b)]).collect()
    }
}

/// Similarity of one (possibly unseen) entity to every training entity of
/// its side.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryProfile {
    values: Vec<f64>,
    side: Side,
}

impl QueryProfile {
    pub fn new(values: Vec<f64>, side: Side) -> Result<Self> {
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::SimilarityRange {
                row: 0,
                col: i,
                value: v,
            });
        }
        Ok(Self { values, side })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Similarity matrices and interactions over a fixed set of drugs and targets.
#[derive(Debug, Clone, PartialEq)]
pub struct DtiDataset {
    drug_ids: Vec<String>,
    target_ids: Vec<String>,
    drug_sim: SimilarityMatrix,
    target_sim: SimilarityMatrix,
    interactions: InteractionMatrix,
}

impl DtiDataset {
    /// Builds a dataset and rejects it if [`validate_dataset`] reports any
    /// error. Warnings are accepted.
    pub fn new(
        drug_ids: Vec<String>,
        target_ids: Vec<String>,
        drug_sim: SimilarityMatrix,
        target_sim: SimilarityMatrix,
        interactions: InteractionMatrix,
    ) -> Result<Self> {
        let ds =
            Self::from_parts_unchecked(drug_ids, target_ids, drug_sim, target_sim, interactions);
        let errors: Vec<String> = validate_dataset(&ds)
            .into_iter()
            .filter(|f| f.severity == Severity::Error)
            .map(|f| f.message)
            .collect();
        if errors.is_empty() {
            Ok(ds)
        } else {
            Err(Error::InvalidDataset(errors.join("; ")))
        }
    }

    /// Builds a dataset without any checks. Intended for inspecting
    /// malformed inputs with [`validate_dataset`].
    pub fn from_parts_unchecked(
        drug_ids: Vec<String>,
        target_ids: Vec<String>,
        drug_sim: SimilarityMatrix,
        target_sim: SimilarityMatrix,
        interactions: InteractionMatrix,
    ) -> Self {
        Self {
            drug_ids,
            target_ids,
            drug_sim,
            target_sim,
            interactions,
        }
    }

    /// Like [`DtiDataset::new`] with generated ids `d0..`, `t0..`.
    pub fn from_matrices(
        drug_sim: Array2<f64>,
        target_sim: Array2<f64>,
        interactions: Array2<u8>,
    ) -> Result<Self> {
        let drug_ids = (0..drug_sim.nrows()).map(|i| format!("d{i}")).collect();
        let target_ids = (0..target_sim.nrows()).map(|j| format!("t{j}")).collect();
        Self::new(
            drug_ids,
            target_ids,
            SimilarityMatrix::new(drug_sim, Side::Drug)?,
            SimilarityMatrix::new(target_sim, Side::Target)?,
            InteractionMatrix::new(interactions)?,
        )
    }

    pub fn n_drugs(&self) -> usize {
        self.interactions.n_drugs()
    }

    pub fn n_targets(&self) -> usize {
        self.interactions.n_targets()
    }

    pub fn drug_ids(&self) -> &[String] {
        &self.drug_ids
    }

    pub fn target_ids(&self) -> &[String] {
        &self.target_ids
    }

    pub fn drug_sim(&self) -> &SimilarityMatrix {
        &self.drug_sim
    }

    pub fn target_sim(&self) -> &SimilarityMatrix {
        &self.target_sim
    }

    pub fn similarity(&self, side: Side) -> &SimilarityMatrix {
        match side {
            Side::Drug => &self.drug_sim,
            Side::Target => &self.target_sim,
        }
    }

    pub fn interactions(&self) -> &InteractionMatrix {
        &self.interactions
    }

    /// Sub-dataset over the listed drugs and targets, in the given order.
    pub fn subset(&self, drugs: &[usize], targets: &[usize]) -> Result<Self> {
        if drugs.is_empty() || targets.is_empty() {
            return Err(Error::Dimension(
                "subset must keep at least one drug and one target".into(),
            ));
        }
        check_indices(drugs, self.n_drugs())?;
        check_indices(targets, self.n_targets())?;
        Ok(Self {
            drug_ids: drugs.iter().map(|&i| self.drug_ids[i].clone()).collect(),
            target_ids: targets
                .iter()
                .map(|&j| self.target_ids[j].clone())
                .collect(),
            drug_sim: self.drug_sim.select(drugs),
            target_sim: self.target_sim.select(targets),
            interactions: self.interactions.select(drugs, targets),
        })
    }
}

fn check_indices(idx: &[usize], len: usize) -> Result<()> {
    let mut seen = HashSet::with_capacity(idx.len());
    for &i in idx {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if !seen.insert(i) {
            return Err(Error::param(format!("duplicate index {i} in subset")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

impl Finding {
    fn error(message: String) -> Self {
        Self {
            severity: Severity::Error,
            message,
        }
    }

    fn warning(message: String) -> Self {
        Self {
            severity: Severity::Warning,
            message,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Checks every dataset invariant. Shape and range violations are errors,
/// asymmetric similarity matrices are warnings.
pub fn validate_dataset(ds: &DtiDataset) -> Vec<Finding> {
    let mut findings = Vec::new();
    let (n, m) = (ds.n_drugs(), ds.n_targets());

    if ds.drug_sim.len() != n {
        findings.push(Finding::error(format!(
            "drug similarity side {} does not match {n} interaction rows",
            ds.drug_sim.len()
        )));
    }
    if ds.target_sim.len() != m {
        findings.push(Finding::error(format!(
            "target similarity side {} does not match {m} interaction columns",
            ds.target_sim.len()
        )));
    }
    if ds.drug_ids.len() != n {
        findings.push(Finding::error(format!(
            "{} drug ids for {n} drugs",
            ds.drug_ids.len()
        )));
    }
    if ds.target_ids.len() != m {
        findings.push(Finding::error(format!(
            "{} target ids for {m} targets",
            ds.target_ids.len()
        )));
    }
    for (ids, what) in [(&ds.drug_ids, "drug"), (&ds.target_ids, "target")] {
        let mut seen = HashSet::new();
        for id in ids {
            if !seen.insert(id) {
                findings.push(Finding::error(format!("duplicate {what} id `{id}`")));
            }
        }
    }
    for sim in [&ds.drug_sim, &ds.target_sim] {
        check_similarity(sim, &mut findings);
    }
    findings
}

fn check_similarity(sim: &SimilarityMatrix, findings: &mut Vec<Finding>) {
    let side = sim.side();
    let n = sim.len();
    let mut asymmetric = 0usize;
    let mut worst = (0, 0, 0.0f64);
    for a in 0..n {
        for b in 0..n {
            let v = sim.get(a, b);
            if !(0.0..=1.0).contains(&v) {
                findings.push(Finding::error(format!(
                    "{side} similarity {v} at ({a}, {b}) outside [0, 1]"
                )));
            }
            if a == b && (v - 1.0).abs() > DIAGONAL_TOLERANCE {
                findings.push(Finding::error(format!(
                    "{side} similarity diagonal at {a} is {v}, expected 1"
                )));
            }
            if b > a {
                let d = (v - sim.get(b, a)).abs();
                if d > SYMMETRY_TOLERANCE {
                    asymmetric += 1;
                    if d > worst.2 {
                        worst = (a, b, d);
                    }
                }
            }
        }
    }
    if asymmetric > 0 {
        findings.push(Finding::warning(format!(
            "{side} similarity matrix is asymmetric at {asymmetric} pair(s); largest gap {} at ({}, {})",
            worst.2, worst.0, worst.1
        )));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n: usize,
    pub m: usize,
    pub interaction_count: usize,
    pub sparsity: f64,
    pub li_drug: f64,
    pub li_target: f64,
    pub k_used: usize,
}

/// Size, sparsity and dataset-level local imbalance with neighborhood `k`.
pub fn dataset_stats(ds: &DtiDataset, k: usize) -> Result<DatasetStats> {
    let (n, m) = (ds.n_drugs(), ds.n_targets());
    let max_k = n.min(m).saturating_sub(1);
    if k == 0 || k > max_k {
        return Err(Error::param(format!("k = {k} must lie in [1, {max_k}]")));
    }
    let interaction_count = ds.interactions.count_ones();
    let (li_drug, li_target) = imbalance::dataset_local_imbalance(ds, k)?;
    Ok(DatasetStats {
        n,
        m,
        interaction_count,
        sparsity: interaction_count as f64 / (n * m) as f64,
        li_drug,
        li_target,
        k_used: k,
    })
}
