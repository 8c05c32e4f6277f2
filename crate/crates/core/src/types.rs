use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Ground-truth label. Only evaluation code may look at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Normal,
    Anomalous,
    Unknown,
}

impl Label {
    /// Integer code used by the dataset file format.
    pub fn code(self) -> i8 {
        match self {
            Label::Normal => 0,
            Label::Anomalous => 1,
            Label::Unknown => -1,
        }
    }

    pub fn from_code(code: i8) -> Option<Self> {
        match code {
            0 => Some(Label::Normal),
            1 => Some(Label::Anomalous),
            -1 => Some(Label::Unknown),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sample {
    pub id: u64,
    pub features: Vec<f64>,
    pub label: Label,
}

impl Sample {
    pub fn new(id: u64, features: Vec<f64>, label: Label) -> Self {
        Self { id, features, label }
    }

    pub fn unlabeled(id: u64, features: Vec<f64>) -> Self {
        Self::new(id, features, Label::Unknown)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Role {
    Train,
    Test,
}

/// A validated, non-empty collection of samples sharing one dimension, with
/// strictly ascending ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    dim: usize,
    role: Role,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, role: Role) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::InvalidDataset("dataset must contain at least one sample".into()))?;
        let dim = first.features.len();
        if dim == 0 {
            return Err(Error::InvalidDataset("feature dimension must be at least 1".into()));
        }
        for (pos, s) in samples.iter().enumerate() {
            if s.features.len() != dim {
                return Err(Error::InvalidDataset(format!(
                    "sample {} has dimension {}, expected {dim}",
                    s.id,
                    s.features.len()
                )));
            }
            if let Some(j) = s.features.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "sample {} has a non-finite value in feature {j}",
                    s.id
                )));
            }
            if pos > 0 && samples[pos - 1].id >= s.id {
                return Err(Error::InvalidDataset(format!(
                    "sample ids must be unique and ascending (id {} follows {})",
                    s.id,
                    samples[pos - 1].id
                )));
            }
        }
        Ok(Self { samples, dim, role })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false for a constructed dataset; provided for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.samples.iter().map(|s| s.id)
    }

    pub fn labels(&self) -> Vec<Label> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Position of `id` in sample order.
    pub fn position(&self, id: u64) -> Option<usize> {
        self.samples.binary_search_by_key(&id, |s| s.id).ok()
    }

    /// New dataset holding the samples whose ids appear in `ids` (ascending).
    pub fn subset_by_ids(&self, ids: &[u64]) -> Result<Self> {
        let mut out = Vec::with_capacity(ids.len());
        for &id in ids {
            let pos = self
                .position(id)
                .ok_or_else(|| Error::InvalidDataset(format!("id {id} is not in the dataset")))?;
            out.push(self.samples[pos].clone());
        }
        Self::new(out, self.role)
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }
}

/// Fraction of anomalous samples in a training set, in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct NoiseRatio(f64);

impl NoiseRatio {
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..1.0).contains(&alpha) {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidNoiseRatio(alpha))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Anomaly count for a set of `n` samples, rounding half up.
    pub fn count_of(self, n: usize) -> usize {
        libm::floor(self.0 * n as f64 + 0.5) as usize
    }
}

impl TryFrom<f64> for NoiseRatio {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<NoiseRatio> for f64 {
    fn from(value: NoiseRatio) -> f64 {
        value.0
    }
}
