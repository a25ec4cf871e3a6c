//! Gaussian RBF kernel matrices.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::Matrix;
use crate::{Error, Result};

/// `a_ij = exp(-||x_i - x_j||^2 / (2 sigma^2))` over the rows of `points`.
pub fn build_rbf_kernel(points: &Matrix, sigma: f64) -> Result<Matrix> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Argument(format!("sigma must be positive, got {sigma}")));
    }
    crate::matcore::ensure_finite(points)?;
    let n = points.nrows();
    let denom = 2.0 * sigma * sigma;
    let mut k = Matrix::identity(n, n);
    for i in 0..n {
        for j in 0..i {
            let d2 = (points.row(i) - points.row(j)).norm_squared();
            let v = (-d2 / denom).exp();
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(k)
}

/// `n` points in `R^d` with standard normal coordinates.
pub fn gaussian_points<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(n, d, |_, _| StandardNormal.sample(rng))
}
