use alloc::format;
use alloc::vec::Vec;

use super::check_dim;
use crate::linalg::{covariance, mat_vec, mean, norm, spectral_map, symmetric_eigen};
use crate::{Error, Result};

/// Gaussian maximum-likelihood fit with a ridge on the covariance diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MahalanobisModel {
    mean: Vec<f64>,
    covariance: Vec<f64>,
    inverse_covariance: Vec<f64>,
    whitening: Vec<f64>,
}

impl MahalanobisModel {
    pub(super) fn fit(rows: &[&[f64]], dim: usize, ridge: f64) -> Result<Self> {
        let mean = mean(rows, dim);
        let mut cov = covariance(rows, &mean, rows.len() as f64);
        for i in 0..dim {
            cov[i * dim + i] += ridge;
        }
        let eig = symmetric_eigen(&cov, dim);
        let largest = eig.values[0];
        let smallest = eig.values[dim - 1];
        let degenerate = if ridge > 0.0 {
            smallest <= 0.0
        } else {
            smallest <= 1e-12 * largest.max(0.0)
        };
        if degenerate {
            return Err(Error::Fit(format!(
                "covariance is rank deficient (smallest eigenvalue {smallest:e}); use a positive ridge"
            )));
        }
        let inverse_covariance = spectral_map(&eig, |l| 1.0 / l);
        let whitening = spectral_map(&eig, |l| 1.0 / libm::sqrt(l));
        Ok(Self {
            mean,
            covariance: cov,
            inverse_covariance,
            whitening,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Row-major `d x d` covariance, ridge included.
    pub fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    pub fn inverse_covariance(&self) -> &[f64] {
        &self.inverse_covariance
    }

    /// Mahalanobis distance to the fitted mean.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        Ok(norm(&self.representation(x)?))
    }

    /// `Sigma^{-1/2} (x - mean)`.
    pub fn representation(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        Ok(mat_vec(&self.whitening, &centered))
    }
}
