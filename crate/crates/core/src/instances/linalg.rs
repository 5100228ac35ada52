//! Dense complex linear algebra on row-major `n x n` slices, backed by
//! nalgebra.

use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub fn to_dmatrix(n: usize, entries: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(n, n, entries)
}

pub fn from_dmatrix(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    (0..n)
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)])
        .collect()
}

/// Largest singular value.
pub fn spectral_norm(n: usize, entries: &[Complex64]) -> f64 {
    if n == 0 {
        return 0.0;
    }
    to_dmatrix(n, entries).singular_values().max()
}

pub fn inverse(n: usize, entries: &[Complex64]) -> Result<Vec<Complex64>> {
    to_dmatrix(n, entries)
        .try_inverse()
        .map(|m| from_dmatrix(&m))
        .ok_or(Error::Singular)
}

/// A Haar-ish random unitary: the Q factor of a complex Gaussian-like
/// matrix.
pub fn random_unitary<G: Rng + ?Sized>(n: usize, rng: &mut G) -> Vec<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    from_dmatrix(&m.qr().q())
}

/// Indices of `rank` linearly independent columns of `x`, chosen by
/// pivoted Gram-Schmidt (largest residual first, ties to the lowest
/// index).
pub fn independent_columns(n: usize, x: &[Complex64], rank: usize) -> Vec<usize> {
    let mut residual: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| x[i * n + j]).collect())
        .collect();
    let mut chosen = Vec::with_capacity(rank);
    for _ in 0..rank {
        let mut best = None;
        let mut best_norm = -1.0;
        for (j, col) in residual.iter().enumerate() {
            if chosen.contains(&j) {
                continue;
            }
            let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > best_norm + 1e-12 {
                best_norm = norm;
                best = Some(j);
            }
        }
        let Some(p) = best else { break };
        chosen.push(p);
        let q: Vec<Complex64> = residual[p].iter().map(|z| z / best_norm).collect();
        for col in residual.iter_mut() {
            let dot: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
            for (c, a) in col.iter_mut().zip(q.iter()) {
                *c -= dot * a;
            }
        }
    }
    chosen
}
