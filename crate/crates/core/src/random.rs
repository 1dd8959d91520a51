//! Random operators and states for property checks and the CLI suites.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::{CMatrix, DensityMatrix, HermitianOperator};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Ginibre matrix with standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

/// GUE-like Hermitian matrix `(G + G*) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    HermitianOperator::from_raw(ginibre(rng, dim, dim))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let (q, r) = qr.unpack();
    let mut q = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Random pure state vector, uniformly distributed on the sphere.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let n = v.norm();
    v.unscale(n)
}

/// Random state of the given rank, `G G* / tr(G G*)` with `G` of size
/// `dim x rank` (Hilbert-Schmidt measure for `rank = dim`).
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.clamp(1, dim));
    DensityMatrix::from_psd_unnormalized(&g * g.adjoint())
}

pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, r: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..r).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}
