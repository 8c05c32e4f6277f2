//! Evaluation metrics. These are the only functions that read ground-truth
//! labels.

use alloc::format;
use alloc::vec::Vec;

use crate::{Dataset, Error, Label, PurifiedSet, Result};

/// Cross-tabulation of retention against ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PurityBreakdown {
    pub retained_normal: usize,
    pub retained_anomalous: usize,
    pub discarded_normal: usize,
    pub discarded_anomalous: usize,
}

impl PurityBreakdown {
    pub fn total(&self) -> usize {
        self.retained_normal + self.retained_anomalous + self.discarded_normal + self.discarded_anomalous
    }
}

/// Area under the ROC curve by the Mann-Whitney rank-sum statistic, with tied
/// scores receiving half credit.
pub fn auroc(labels: &[Label], scores: &[f64]) -> Result<f64> {
    if labels.len() != scores.len() {
        return Err(Error::Alignment {
            expected: labels.len(),
            actual: scores.len(),
        });
    }
    if labels.contains(&Label::Unknown) {
        return Err(Error::UndefinedMetric("AUROC needs known labels".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::UndefinedMetric("AUROC needs finite scores".into()));
    }
    let n_anom = labels.iter().filter(|&&l| l == Label::Anomalous).count();
    let n_norm = labels.len() - n_anom;
    if n_anom == 0 || n_norm == 0 {
        return Err(Error::UndefinedMetric("AUROC needs both normal and anomalous samples".into()));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Twice the rank sum keeps mid-ranks integral.
    let mut doubled_rank_sum: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end share the mid-rank (start + 1 + end) / 2
        let doubled_mid = (start + 1 + end) as u128;
        let anomalies = order[start..end]
            .iter()
            .filter(|&&i| labels[i] == Label::Anomalous)
            .count() as u128;
        doubled_rank_sum += doubled_mid * anomalies;
        start = end;
    }
    let na = n_anom as u128;
    let doubled_u = doubled_rank_sum - na * (na + 1);
    Ok(doubled_u as f64 / (2.0 * n_anom as f64 * n_norm as f64))
}

fn label_of(train: &Dataset, id: u64) -> Result<Label> {
    let pos = train
        .position(id)
        .ok_or_else(|| Error::InvalidDataset(format!("id {id} is not in the training set")))?;
    match train.samples()[pos].label {
        Label::Unknown => Err(Error::UndefinedMetric(format!("sample {id} has no ground-truth label"))),
        l => Ok(l),
    }
}

/// Share of anomalies among `retained_ids`.
pub fn contamination_rate(retained_ids: &[u64], train: &Dataset) -> Result<f64> {
    if retained_ids.is_empty() {
        return Err(Error::UndefinedMetric("contamination of an empty set".into()));
    }
    let mut anomalous = 0usize;
    for &id in retained_ids {
        if label_of(train, id)? == Label::Anomalous {
            anomalous += 1;
        }
    }
    Ok(anomalous as f64 / retained_ids.len() as f64)
}

pub fn purity_breakdown(pure: &PurifiedSet, train: &Dataset) -> Result<PurityBreakdown> {
    let mut b = PurityBreakdown::default();
    for s in train.samples() {
        let kept = pure.contains(s.id);
        match (s.label, kept) {
            (Label::Normal, true) => b.retained_normal += 1,
            (Label::Anomalous, true) => b.retained_anomalous += 1,
            (Label::Normal, false) => b.discarded_normal += 1,
            (Label::Anomalous, false) => b.discarded_anomalous += 1,
            (Label::Unknown, _) => {
                return Err(Error::UndefinedMetric(format!("sample {} has no ground-truth label", s.id)))
            }
        }
    }
    if let Some(&id) = pure.retained_ids.iter().find(|&&id| train.position(id).is_none()) {
        return Err(Error::InvalidDataset(format!("retained id {id} is not in the training set")));
    }
    Ok(b)
}
