//! Seeded balanced partitioning of a training set into `k` disjoint subsets.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::{Dataset, Error, Result};

/// Derives an independent 64-bit seed for stream `index` from `master`
/// (splitmix64 finalizer over a golden-ratio offset).
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Assignment of every training position to exactly one of `k` subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartitionPlan {
    k: usize,
    assignment: Vec<usize>,
    seed: u64,
}

impl PartitionPlan {
    /// Builds a plan from an explicit assignment, checking that it is a
    /// balanced cover of `[0, k)`.
    pub fn from_assignment(k: usize, assignment: Vec<usize>, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPartition("k must be at least 1".into()));
        }
        let mut sizes = vec![0usize; k];
        for &j in &assignment {
            if j >= k {
                return Err(Error::InvalidPartition(format!("subset index {j} out of range for k = {k}")));
            }
            sizes[j] += 1;
        }
        let min = sizes.iter().copied().min().unwrap_or(0);
        let max = sizes.iter().copied().max().unwrap_or(0);
        if min == 0 {
            return Err(Error::InvalidPartition("every subset must receive at least one sample".into()));
        }
        if max - min > 1 {
            return Err(Error::InvalidPartition(format!("unbalanced subsets (sizes {min}..={max})")));
        }
        Ok(Self { k, assignment, seed })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Subset that holds training position `i`.
    pub fn subset_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Training positions of subset `j`, ascending.
    pub fn members(&self, j: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| (s == j).then_some(i))
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &j in &self.assignment {
            sizes[j] += 1;
        }
        sizes
    }
}

/// Shuffles `[0, N)` with a seeded Fisher-Yates pass and deals the shuffled
/// positions round-robin into `k` subsets.
pub fn partition_dataset(dataset: &Dataset, k: usize, seed: u64) -> Result<PartitionPlan> {
    partition_len(dataset.len(), k, seed)
}

pub(crate) fn partition_len(n: usize, k: usize, seed: u64) -> Result<PartitionPlan> {
    if k == 0 {
        return Err(Error::InvalidPartition("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidPartition(format!("k = {k} exceeds the number of samples {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n];
    for (slot, &i) in order.iter().enumerate() {
        assignment[i] = slot % k;
    }
    Ok(PartitionPlan { k, assignment, seed })
}
