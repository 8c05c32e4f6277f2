//! Synthetic contaminated datasets: a dominant compact Gaussian cluster of
//! normals and sparse anomalies spread over several tight modes placed on a
//! shell far from the normal cluster.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::{Dataset, Error, Label, NoiseRatio, Result, Role, Sample};

const CENTER_STREAM: u64 = 0;
const TRAIN_STREAM: u64 = 1;
const TEST_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SyntheticConfig {
    pub n_train: usize,
    pub alpha: NoiseRatio,
    pub n_test_normal: usize,
    pub n_test_anomalous: usize,
    pub dim: usize,
    pub normal_spread: f64,
    pub anomaly_modes: usize,
    pub anomaly_radius_range: (f64, f64),
    pub anomaly_mode_spread: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_train: 500,
            alpha: NoiseRatio::new(0.1).expect("valid"),
            n_test_normal: 500,
            n_test_anomalous: 500,
            dim: 8,
            normal_spread: 0.5,
            anomaly_modes: 8,
            anomaly_radius_range: (3.0, 6.0),
            anomaly_mode_spread: 0.3,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let (r_min, r_max) = self.anomaly_radius_range;
        let checks = [
            (self.n_train >= 1, "n_train must be at least 1"),
            (self.n_test_normal >= 1, "n_test_normal must be at least 1"),
            (self.n_test_anomalous >= 1, "n_test_anomalous must be at least 1"),
            (self.dim >= 1, "dim must be at least 1"),
            (self.anomaly_modes >= 1, "anomaly_modes must be at least 1"),
            (
                self.normal_spread > 0.0 && self.normal_spread.is_finite(),
                "normal_spread must be positive",
            ),
            (
                self.anomaly_mode_spread > 0.0 && self.anomaly_mode_spread.is_finite(),
                "anomaly_mode_spread must be positive",
            ),
            (
                r_min > 0.0 && r_min <= r_max && r_max.is_finite(),
                "anomaly_radius_range must satisfy 0 < r_min <= r_max",
            ),
            (
                r_min > 2.0 * self.normal_spread,
                "anomaly_radius_range.0 must exceed twice normal_spread",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::Config(format!("synthetic config: {msg}"))),
            None => Ok(()),
        }
    }

    pub fn train_anomalies(&self) -> usize {
        self.alpha.count_of(self.n_train)
    }
}

fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn gaussian(rng: &mut ChaCha20Rng, dim: usize, spread: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| spread * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Centres of the anomaly modes: uniformly random directions, radius uniform
/// in `anomaly_radius_range`.
pub fn mode_centers(config: &SyntheticConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let mut rng = stream(config.seed, CENTER_STREAM);
    let (r_min, r_max) = config.anomaly_radius_range;
    let mut centers = Vec::with_capacity(config.anomaly_modes);
    while centers.len() < config.anomaly_modes {
        let dir = gaussian(&mut rng, config.dim, 1.0);
        let len = libm::sqrt(dir.iter().map(|v| v * v).sum());
        if len < 1e-12 {
            continue;
        }
        let radius = r_min + (r_max - r_min) * rng.random::<f64>();
        centers.push(dir.iter().map(|v| v / len * radius).collect());
    }
    Ok(centers)
}

fn draw(rng: &mut ChaCha20Rng, labels: &[Label], config: &SyntheticConfig, centers: &[Vec<f64>]) -> Vec<Sample> {
    labels
        .iter()
        .enumerate()
        .map(|(i, &label)| {
            let features = match label {
                Label::Anomalous => {
                    let mode = &centers[rng.random_range(0..centers.len())];
                    let noise = gaussian(rng, config.dim, config.anomaly_mode_spread);
                    mode.iter().zip(noise).map(|(c, e)| c + e).collect()
                }
                _ => gaussian(rng, config.dim, config.normal_spread),
            };
            Sample::new(i as u64, features, label)
        })
        .collect()
}

/// Draws a labelled training set with `round(alpha * n_train)` anomalies and a
/// test set with the configured class counts. Both sets share mode centres
/// but use independent random streams.
pub fn generate(config: &SyntheticConfig) -> Result<(Dataset, Dataset)> {
    let centers = mode_centers(config)?;

    let mut rng = stream(config.seed, TRAIN_STREAM);
    let n_anom = config.train_anomalies();
    let mut labels = vec![Label::Normal; config.n_train - n_anom];
    labels.extend(core::iter::repeat_n(Label::Anomalous, n_anom));
    labels.shuffle(&mut rng);
    let train = Dataset::new(draw(&mut rng, &labels, config, &centers), Role::Train)?;

    let mut rng = stream(config.seed, TEST_STREAM);
    let mut labels = vec![Label::Normal; config.n_test_normal];
    labels.extend(core::iter::repeat_n(Label::Anomalous, config.n_test_anomalous));
    labels.shuffle(&mut rng);
    let test = Dataset::new(draw(&mut rng, &labels, config, &centers), Role::Test)?;

    Ok((train, test))
}
