//! Nearest-rank quantile thresholding of consensus scores.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Dataset, Error, Result};

/// Per-sample aggregated anomaly scores, index-aligned with a training set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ConsensusScores(Vec<f64>);

impl ConsensusScores {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("consensus scores must be finite".into()));
        }
        Ok(Self(scores))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Samples kept for final training, together with the threshold that kept
/// them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PurifiedSet {
    pub retained_ids: Vec<u64>,
    pub tau: f64,
    pub t: f64,
}

impl PurifiedSet {
    pub fn len(&self) -> usize {
        self.retained_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retained_ids.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.retained_ids.binary_search(&id).is_ok()
    }
}

fn check_fraction(t: f64) -> Result<()> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidQuantile(t))
    }
}

/// Number of samples kept out of `n` at fraction `t`: `max(1, floor(t * n))`.
///
/// A 1e-9 slack absorbs products such as `0.29 * 100 = 28.999999999999996`.
pub fn retained_count(t: f64, n: usize) -> usize {
    let m = libm::floor(t * n as f64 + 1e-9) as usize;
    m.clamp(1, n.max(1))
}

/// The `m`-th smallest score, `m = max(1, floor(t * N))`.
pub fn compute_threshold(scores: &ConsensusScores, t: f64) -> Result<f64> {
    check_fraction(t)?;
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = retained_count(t, scores.len());
    let mut work = scores.0.clone();
    let (_, nth, _) = work.select_nth_unstable_by(m - 1, f64::total_cmp);
    Ok(*nth)
}

/// Keeps the `max(1, floor(t * N))` samples with the smallest scores. Ties are
/// broken by ascending sample id, so the count is always exact.
pub fn select_pure(dataset: &Dataset, scores: &ConsensusScores, t: f64) -> Result<PurifiedSet> {
    if scores.len() != dataset.len() {
        return Err(Error::Alignment {
            expected: dataset.len(),
            actual: scores.len(),
        });
    }
    let ids: Vec<u64> = dataset.ids().collect();
    select_lowest(&ids, scores.as_slice(), t)
}

pub(crate) fn select_lowest(ids: &[u64], scores: &[f64], t: f64) -> Result<PurifiedSet> {
    check_fraction(t)?;
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = retained_count(t, scores.len());
    let mut order: Vec<usize> = (0..scores.len()).collect();
    let by_score_then_id = |&a: &usize, &b: &usize| -> Ordering {
        scores[a].total_cmp(&scores[b]).then(ids[a].cmp(&ids[b]))
    };
    if m < order.len() {
        order.select_nth_unstable_by(m - 1, by_score_then_id);
    }
    let kept = &order[..m];
    let tau = kept
        .iter()
        .map(|&i| scores[i])
        .max_by(f64::total_cmp)
        .expect("m >= 1");
    let mut retained_ids: Vec<u64> = kept.iter().map(|&i| ids[i]).collect();
    retained_ids.sort_unstable();
    Ok(PurifiedSet { retained_ids, tau, t })
}
