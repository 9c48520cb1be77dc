//! Seeded random matrix generators for property tests, the acceptance suite
//! and the oracle's starting points.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::Matrix;

/// Matrix with i.i.d. standard normal entries.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::wrap(DMatrix::from_fn(rows, cols, |_, _| {
        rng.sample(StandardNormal)
    }))
}

/// Matrix with entries uniform in `[-1, 1]`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::wrap(DMatrix::from_fn(rows, cols, |_, _| {
        rng.random_range(-1.0..=1.0)
    }))
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of `R`'s diagonal folded into `Q`).
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let qr = gaussian(rng, n, n).into_dmatrix().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Matrix::wrap(q)
}

/// Gaussian product of inner dimension `rank`, so the rank is exactly `rank`
/// almost surely.
pub fn rank_deficient<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> Matrix {
    let left = gaussian(rng, rows, rank).into_dmatrix();
    let right = gaussian(rng, rank, cols).into_dmatrix();
    Matrix::wrap(left * right)
}

/// `P diag(spectrum) Q^T` with Haar-random orthogonal `P`, `Q`.
pub fn with_spectrum<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    spectrum: &[f64],
) -> Matrix {
    assert!(spectrum.len() <= rows.min(cols));
    let p = orthogonal(rng, rows).into_dmatrix();
    let q = orthogonal(rng, cols).into_dmatrix();
    let mut d = DMatrix::zeros(rows, cols);
    for (i, s) in spectrum.iter().enumerate() {
        d[(i, i)] = *s;
    }
    Matrix::wrap(p * d * q.transpose())
}

/// Random unit vector in `R^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
