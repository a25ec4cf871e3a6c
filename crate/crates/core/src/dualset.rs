//! Deterministic dual-set spectral-Frobenius sparsification.
//!
//! Given vectors `x_1..x_n` (columns of `X`, any dimension) and a decomposition of
//! the identity `v_1..v_n` in `R^k`, picks weights `s_i >= 0`, at most `r` nonzero, with
//!
//! * `lambda_k(sum s_i v_i v_i^T) >= (1 - sqrt(k/r))^2`
//! * `tr(sum s_i x_i x_i^T) <= ||X||_F^2`

use nalgebra::SymmetricEigen;

use crate::matcore::Matrix;
use crate::{Error, Result};

/// Relative slack applied to the two-sided feasibility test.
const FEASIBILITY_SLACK: f64 = 1e-12;

/// Input to [`dual_set_sparsify`].
#[derive(Debug, Clone)]
pub struct DualSetInput {
    x: Matrix,
    v: Matrix,
    r: usize,
}

impl DualSetInput {
    /// `x` is `l x n` (one column per `x_i`), `v` is `n x k` (one row per `v_i`).
    pub fn new(x: Matrix, v: Matrix, r: usize) -> Result<Self> {
        let n = v.nrows();
        let k = v.ncols();
        if x.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "X has {} columns but V has {} rows",
                x.ncols(),
                n
            )));
        }
        if k == 0 || !(k < r && r < n) {
            return Err(Error::Argument(format!("need k < r < n, got k={k}, r={r}, n={n}")));
        }
        let gram = v.transpose() * &v;
        let defect = (gram - Matrix::identity(k, k)).norm();
        if !(defect <= 1e-8) {
            return Err(Error::Argument(format!(
                "V^T V differs from the identity by {defect:.3e} in Frobenius norm"
            )));
        }
        Ok(Self { x, v, r })
    }

    pub fn n(&self) -> usize {
        self.v.nrows()
    }

    pub fn k(&self) -> usize {
        self.v.ncols()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }
}

/// Non-negative weights, one per input vector.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub s: Vec<f64>,
}

impl WeightVector {
    pub fn nonzero_count(&self) -> usize {
        self.s.iter().filter(|w| **w != 0.0).count()
    }

    /// Indices with nonzero weight, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.s
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// `lambda_k(sum s_i v_i v_i^T)` and `tr(sum s_i x_i x_i^T)` for checking the guarantees.
#[derive(Debug, Clone, Copy)]
pub struct Certificate {
    pub lambda_min: f64,
    pub spectral_bound: f64,
    pub trace: f64,
    pub frobenius_bound: f64,
}

impl Certificate {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lambda_min >= self.spectral_bound * (1.0 - rel_tol)
            && self.trace <= self.frobenius_bound * (1.0 + rel_tol)
    }
}

pub fn certify(input: &DualSetInput, weights: &WeightVector) -> Certificate {
    let k = input.k();
    let mut a = Matrix::zeros(k, k);
    let mut trace = 0.0;
    for (i, &s) in weights.s.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let vi = input.v.row(i).transpose();
        a += s * &vi * vi.transpose();
        trace += s * input.x.column(i).norm_squared();
    }
    let lambda_min = SymmetricEigen::new(a).eigenvalues.min();
    let ratio = (k as f64 / input.r as f64).sqrt();
    Certificate {
        lambda_min,
        spectral_bound: (1.0 - ratio).powi(2),
        trace,
        frobenius_bound: input.x.norm_squared(),
    }
}

fn phi(eigenvalues: &[f64], l: f64) -> f64 {
    eigenvalues.iter().map(|lam| 1.0 / (lam - l)).sum()
}

/// Runs `r` barrier iterations and returns the rescaled weights.
pub fn dual_set_sparsify(input: &DualSetInput) -> Result<WeightVector> {
    let n = input.n();
    let k = input.k();
    let r = input.r;
    let ratio = (k as f64 / r as f64).sqrt();
    let delta_u = input.x.norm_squared() / (1.0 - ratio);
    let x_sq: Vec<f64> = input.x.column_iter().map(|c| c.norm_squared()).collect();
    let root_rk = ((r * k) as f64).sqrt();

    let mut s = vec![0.0; n];
    let mut a = Matrix::zeros(k, k);
    for tau in 0..r {
        let l = tau as f64 - root_rk;
        let l_next = l + 1.0;
        let eig = SymmetricEigen::new(a.clone());
        let lambdas: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let gap = phi(&lambdas, l_next) - phi(&lambdas, l);
        let mut chosen = None;
        for j in 0..n {
            let z = eig.eigenvectors.tr_mul(&input.v.row(j).transpose());
            let mut q1 = 0.0;
            let mut q2 = 0.0;
            for (zi, lam) in z.iter().zip(&lambdas) {
                let d = lam - l_next;
                q1 += zi * zi / d;
                q2 += zi * zi / (d * d);
            }
            let upper = q2 / gap - q1;
            let lower = if delta_u > 0.0 { x_sq[j] / delta_u } else { 0.0 };
            if upper > 0.0 && lower <= upper * (1.0 + FEASIBILITY_SLACK) {
                chosen = Some((j, 0.5 * (lower + upper)));
                break;
            }
        }
        let (j, t_inv) = chosen.ok_or_else(|| {
            Error::Numerical(format!("dual-set sparsification found no feasible index at step {tau}"))
        })?;
        let t = 1.0 / t_inv;
        s[j] += t;
        let vj = input.v.row(j).transpose();
        a += t * &vj * vj.transpose();
    }
    let scale = (1.0 - ratio) / r as f64;
    s.iter_mut().for_each(|w| *w *= scale);
    Ok(WeightVector { s })
}
