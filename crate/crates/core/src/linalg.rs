//! Small dense symmetric linear algebra on row-major `Vec<f64>` buffers.

use alloc::vec;
use alloc::vec::Vec;

const MAX_SWEEPS: usize = 100;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub(crate) fn mean(rows: &[&[f64]], dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim];
    for r in rows {
        for (acc, v) in m.iter_mut().zip(r.iter()) {
            *acc += v;
        }
    }
    let n = rows.len() as f64;
    m.iter_mut().for_each(|v| *v /= n);
    m
}

/// Scatter matrix of `rows` about `center`, divided by `denom`.
pub(crate) fn covariance(rows: &[&[f64]], center: &[f64], denom: f64) -> Vec<f64> {
    let d = center.len();
    let mut cov = vec![0.0; d * d];
    let mut centered = vec![0.0; d];
    for r in rows {
        for ((c, x), m) in centered.iter_mut().zip(r.iter()).zip(center) {
            *c = x - m;
        }
        for p in 0..d {
            for q in p..d {
                cov[p * d + q] += centered[p] * centered[q];
            }
        }
    }
    for p in 0..d {
        for q in p..d {
            let v = cov[p * d + q] / denom;
            cov[p * d + q] = v;
            cov[q * d + p] = v;
        }
    }
    cov
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`, with its
    /// largest-magnitude entry made positive.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub(crate) fn symmetric_eigen(matrix: &[f64], n: usize) -> SymmetricEigen {
    debug_assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off == 0.0 || off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    let t = 1.0 / (theta.abs() + libm::hypot(theta, 1.0));
                    if theta < 0.0 { -t } else { t }
                } else {
                    0.0
                };
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&col| {
            let mut e: Vec<f64> = (0..n).map(|row| v[row * n + col]).collect();
            let mut lead = 0;
            for (i, x) in e.iter().enumerate() {
                if x.abs() > e[lead].abs() {
                    lead = i;
                }
            }
            if e[lead] < 0.0 {
                e.iter_mut().for_each(|x| *x = -*x);
            }
            e
        })
        .collect();
    SymmetricEigen { values, vectors }
}

/// `sum_i f(values[i]) * vectors[i] vectors[i]^T`.
pub(crate) fn spectral_map(eig: &SymmetricEigen, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = eig.values.len();
    let mut out = vec![0.0; n * n];
    for (lambda, e) in eig.values.iter().zip(&eig.vectors) {
        let w = f(*lambda);
        for p in 0..n {
            for q in 0..n {
                out[p * n + q] += w * e[p] * e[q];
            }
        }
    }
    out
}

pub(crate) fn mat_vec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    m.chunks_exact(n).map(|row| dot(row, x)).collect()
}
