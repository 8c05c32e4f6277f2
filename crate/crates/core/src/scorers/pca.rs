use alloc::vec::Vec;

use super::{check_dim, PcaComponents};
use crate::linalg::{covariance, dot, mean, norm, symmetric_eigen};
use crate::Result;

/// Mean plus an orthonormal basis of the leading principal directions.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    basis: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
}

impl PcaModel {
    pub(super) fn fit(rows: &[&[f64]], dim: usize, components: PcaComponents) -> Self {
        let mean = mean(rows, dim);
        let cov = covariance(rows, &mean, (rows.len() - 1) as f64);
        let eig = symmetric_eigen(&cov, dim);
        let rank = select_rank(&eig.values, components);
        let basis = eig.vectors.into_iter().take(rank).collect();
        Self {
            mean,
            basis,
            eigenvalues: eig.values,
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Rows are unit-length and mutually orthogonal.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// All covariance eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn centered_projection(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        let mut projected = alloc::vec![0.0; centered.len()];
        for b in &self.basis {
            let c = dot(b, &centered);
            for (p, e) in projected.iter_mut().zip(b) {
                *p += c * e;
            }
        }
        (centered, projected)
    }

    /// Norm of the residual left after projecting onto the basis.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        let (centered, projected) = self.centered_projection(x);
        let residual: Vec<f64> = centered.iter().zip(&projected).map(|(c, p)| c - p).collect();
        Ok(norm(&residual))
    }

    /// Reconstruction of `x` from its subspace coordinates, in ambient space.
    pub fn representation(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        let (_, projected) = self.centered_projection(x);
        Ok(projected.iter().zip(&self.mean).map(|(p, m)| p + m).collect())
    }
}

fn select_rank(values: &[f64], components: PcaComponents) -> usize {
    let d = values.len();
    match components {
        PcaComponents::Count(r) => r.min(d),
        PcaComponents::VarianceFraction(f) => {
            let clipped: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            if total <= 0.0 {
                return 1;
            }
            let mut acc = 0.0;
            for (i, v) in clipped.iter().enumerate() {
                acc += v;
                if acc >= f * total {
                    return i + 1;
                }
            }
            d
        }
    }
}
