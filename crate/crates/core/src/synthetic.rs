//! Seeded generator of small clustered datasets for examples and tests.
//!
//! Drugs and targets are dealt into latent groups. Similarities are high
//! within a group and low across groups; interactions are dense between
//! drug group `g` and target group `g` and sparse elsewhere.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::DtiDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_drugs: usize,
    pub n_targets: usize,
    pub groups: usize,
    /// Interaction probability for a drug and target of the same group.
    pub density_within: f64,
    /// Interaction probability across groups.
    pub density_between: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_drugs: 30,
            n_targets: 20,
            groups: 3,
            density_within: 0.45,
            density_between: 0.04,
            seed: 0,
        }
    }
}

fn similarity(groups: &[usize], rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = groups.len();
    let mut s = Array2::<f64>::eye(n);
    for a in 0..n {
        for b in (a + 1)..n {
            let v = if groups[a] == groups[b] {
                0.45 + 0.5 * rng.random::<f64>()
            } else {
                0.3 * rng.random::<f64>()
            };
            s[(a, b)] = v;
            s[(b, a)] = v;
        }
    }
    s
}

pub fn generate(cfg: &SyntheticConfig) -> Result<DtiDataset> {
    if cfg.n_drugs == 0 || cfg.n_targets == 0 || cfg.groups == 0 {
        return Err(Error::param(
            "synthetic dataset needs drugs, targets and groups",
        ));
    }
    for p in [cfg.density_within, cfg.density_between] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("density {p} outside [0, 1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let drug_groups: Vec<usize> = (0..cfg.n_drugs).map(|i| i % cfg.groups).collect();
    let target_groups: Vec<usize> = (0..cfg.n_targets).map(|j| j % cfg.groups).collect();
    let drug_sim = similarity(&drug_groups, &mut rng);
    let target_sim = similarity(&target_groups, &mut rng);
    let mut y = Array2::<u8>::zeros((cfg.n_drugs, cfg.n_targets));
    for ((i, j), v) in y.indexed_iter_mut() {
        let p = if drug_groups[i] == target_groups[j] {
            cfg.density_within
        } else {
            cfg.density_between
        };
        *v = u8::from(rng.random::<f64>() < p);
    }
    if y.iter().all(|&v| v == 0) {
        y[(0, 0)] = 1;
    }
    DtiDataset::from_matrices(drug_sim, target_sim, y)
}
