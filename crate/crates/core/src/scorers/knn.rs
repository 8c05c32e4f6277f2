use alloc::vec::Vec;

use super::check_dim;
use crate::linalg::squared_distance;
use crate::Result;

/// Memory bank of every fitted feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    bank: Vec<f64>,
    dim: usize,
    neighbors: usize,
}

impl KnnModel {
    pub(super) fn fit(rows: &[&[f64]], dim: usize, neighbors: usize) -> Self {
        let bank = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { bank, dim, neighbors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn neighbors(&self) -> usize {
        self.neighbors
    }

    pub fn bank_len(&self) -> usize {
        self.bank.len() / self.dim
    }

    pub fn bank(&self) -> impl Iterator<Item = &[f64]> {
        self.bank.chunks_exact(self.dim)
    }

    /// Mean Euclidean distance to the `neighbors` closest bank vectors.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x)?;
        let mut dists: Vec<f64> = self.bank().map(|b| squared_distance(b, x)).collect();
        let k = self.neighbors;
        if k < dists.len() {
            dists.select_nth_unstable_by(k - 1, f64::total_cmp);
        }
        let nearest = &mut dists[..k];
        nearest.sort_unstable_by(f64::total_cmp);
        let total: f64 = nearest.iter().map(|&d| libm::sqrt(d)).sum();
        Ok(total / k as f64)
    }

    /// The closest bank vector (lowest bank index on ties).
    pub fn representation(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x)?;
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, b) in self.bank().enumerate() {
            let d = squared_distance(b, x);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        Ok(self.bank[best * self.dim..(best + 1) * self.dim].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn model(rows: &[&[f64]], k: usize) -> KnnModel {
        KnnModel::fit(rows, rows[0].len(), k)
    }

    #[test]
    fn bank_is_verbatim() {
        let rows: [&[f64]; 3] = [&[0.1, -2.0], &[3.5, 0.0], &[1e-300, 7.0]];
        let m = model(&rows, 2);
        let bank: Vec<&[f64]> = m.bank().collect();
        assert_eq!(bank, rows);
    }

    #[test]
    fn self_distance_is_zero() {
        let rows: [&[f64]; 3] = [&[0.0, 0.0], &[2.0, 0.0], &[5.0, 5.0]];
        let m = model(&rows, 1);
        for r in rows {
            assert_eq!(m.score(r).unwrap(), 0.0);
        }
    }

    #[test]
    fn nearest_of_two_is_sqrt2() {
        let m = model(&[&[0.0, 0.0], &[2.0, 0.0]], 1);
        assert_eq!(m.score(&[1.0, 1.0]).unwrap(), core::f64::consts::SQRT_2);
        assert_eq!(m.representation(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn mean_of_k_nearest() {
        let m = model(&[&[0.0], &[1.0], &[3.0], &[10.0]], 3);
        assert_eq!(m.score(&[0.0]).unwrap(), (0.0 + 1.0 + 3.0) / 3.0);
    }

    #[test]
    fn representation_of_member_is_itself() {
        let m = model(&[&[1.0, 2.0], &[4.0, -1.0]], 1);
        assert_eq!(m.representation(&[4.0, -1.0]).unwrap(), vec![4.0, -1.0]);
    }
}
