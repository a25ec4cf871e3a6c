//! Seeded test matrices with controlled spectra.

use rand_distr::{Distribution, StandardNormal};

use crate::matcore::Matrix;
use crate::rng_from_seed;

/// `m x n` Gaussian matrix with i.i.d. standard normal entries.
pub fn gaussian(m: usize, n: usize, seed: u64) -> Matrix {
    let mut rng = rng_from_seed(seed);
    Matrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng))
}

/// Random orthonormal `m x k` basis (Q factor of a Gaussian matrix).
pub fn orthonormal(m: usize, k: usize, seed: u64) -> Matrix {
    assert!(k <= m, "cannot fit {k} orthonormal columns in dimension {m}");
    gaussian(m, k, seed).qr().q()
}

/// `U diag(sigma) V^T` with random orthonormal `U`, `V`.
pub fn with_spectrum(m: usize, n: usize, sigma: &[f64], seed: u64) -> Matrix {
    let r = sigma.len();
    let mut u = orthonormal(m, r, seed);
    let v = orthonormal(n, r, seed.wrapping_add(0x9e37_79b9));
    for (j, s) in sigma.iter().enumerate() {
        u.column_mut(j).scale_mut(*s);
    }
    u * v.transpose()
}

/// Singular values `rate^i`, `i = 0..min(m, n)`.
pub fn decaying_spectrum(m: usize, n: usize, rate: f64, seed: u64) -> Matrix {
    let sigma: Vec<f64> = (0..m.min(n)).map(|i| rate.powi(i as i32)).collect();
    with_spectrum(m, n, &sigma, seed)
}

/// Singular values `(i + 1)^(-exponent)`, `i = 0..min(m, n)`.
pub fn power_law_spectrum(m: usize, n: usize, exponent: f64, seed: u64) -> Matrix {
    let sigma: Vec<f64> = (0..m.min(n)).map(|i| ((i + 1) as f64).powf(-exponent)).collect();
    with_spectrum(m, n, &sigma, seed)
}

/// Rank-`rank` Gaussian product plus `noise` times a Gaussian matrix.
pub fn low_rank(m: usize, n: usize, rank: usize, noise: f64, seed: u64) -> Matrix {
    let left = gaussian(m, rank, seed);
    let right = gaussian(rank, n, seed.wrapping_add(1));
    let mut a = left * right;
    if noise != 0.0 {
        a += gaussian(m, n, seed.wrapping_add(2)) * noise;
    }
    a
}

/// Symmetric positive semidefinite `G G^T` with `G` of width `rank`.
pub fn spsd_low_rank(m: usize, rank: usize, seed: u64) -> Matrix {
    let g = gaussian(m, rank, seed);
    &g * g.transpose()
}
