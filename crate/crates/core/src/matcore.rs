//! Dense linear-algebra substrate.
//!
//! All routines work on [`Matrix`] (a column-major `nalgebra::DMatrix<f64>`) and are
//! pure functions of their inputs. Singular values below
//! `sigma_max * max(m, n) * f64::EPSILON` are treated as zero everywhere, so the
//! pseudoinverse, projections and numerical rank agree with each other.

use nalgebra::{DMatrix, DVector, SVD};

use crate::{Error, Result};

/// Dense matrix of 64-bit reals.
pub type Matrix = DMatrix<f64>;

/// Selects whether a row-wise or column-wise quantity is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

/// Builds a matrix from row-major data, rejecting non-finite entries.
pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Matrix> {
    if data.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} values supplied for a {rows}x{cols} matrix",
            data.len()
        )));
    }
    let a = Matrix::from_row_slice(rows, cols, data);
    ensure_finite(&a)?;
    Ok(a)
}

/// Rejects matrices holding NaN or infinite entries.
pub fn ensure_finite(a: &Matrix) -> Result<()> {
    match a.iter().position(|x| !x.is_finite()) {
        None => Ok(()),
        Some(pos) => Err(Error::InvalidInput(format!(
            "non-finite entry at ({}, {})",
            pos % a.nrows(),
            pos / a.nrows()
        ))),
    }
}

fn ensure_nonempty(a: &Matrix) -> Result<()> {
    if a.is_empty() {
        return Err(Error::InvalidInput(format!(
            "empty {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Singular values at or below this level are treated as zero.
pub fn rank_tolerance(sigma_max: f64, rows: usize, cols: usize) -> f64 {
    sigma_max * rows.max(cols) as f64 * f64::EPSILON
}

/// Thin SVD factors `u * diag(sigma) * v^T`, truncated to the numerical rank
/// and (optionally) to a requested rank.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    /// `m x rho`, orthonormal columns.
    pub u: Matrix,
    /// Non-increasing, strictly positive.
    pub sigma: DVector<f64>,
    /// `n x rho`, orthonormal columns.
    pub v: Matrix,
    pub k_requested: usize,
}

impl TruncatedSvd {
    /// Number of retained singular triplets.
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }

    fn truncate(mut self, k: usize) -> Self {
        if k < self.rank() {
            self.u = self.u.columns(0, k).into_owned();
            self.v = self.v.columns(0, k).into_owned();
            self.sigma = self.sigma.rows(0, k).into_owned();
        }
        self.k_requested = k;
        self
    }
}

/// Unsorted thin factors from nalgebra, or `None` when they fail to reproduce `a`.
fn nalgebra_svd(a: &Matrix) -> Option<(Matrix, Vec<f64>, Matrix)> {
    let svd = SVD::try_new(a.clone(), true, true, 5.0 * f64::EPSILON, 0)?;
    let (u, v_t) = (svd.u?, svd.v_t?);
    let s = svd.singular_values;
    let tol = 1e-12 * a.norm().max(f64::MIN_POSITIVE);
    let p = s.len();
    let consistent = (&u * Matrix::from_diagonal(&s) * &v_t - a).norm() <= tol
        && (u.transpose() * &u - Matrix::identity(p, p)).norm() <= 1e-12 * p as f64
        && (&v_t * v_t.transpose() - Matrix::identity(p, p)).norm() <= 1e-12 * p as f64;
    consistent.then(|| (u, s.iter().copied().collect(), v_t.transpose()))
}

fn faer_svd(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let f = faer::Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let svd = f
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    Ok((
        Matrix::from_fn(a.nrows(), s.nrows(), |i, j| u[(i, j)]),
        s.iter().copied().collect(),
        Matrix::from_fn(a.ncols(), s.nrows(), |i, j| v[(i, j)]),
    ))
}

/// Full thin SVD with singular values sorted non-increasingly (zeros kept).
///
/// nalgebra resolves small singular values more accurately but occasionally returns
/// factors that do not reproduce the input on rank-deficient matrices; those cases are
/// recomputed with faer.
pub(crate) fn sorted_svd(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    ensure_nonempty(a)?;
    ensure_finite(a)?;
    let (u, s, v) = match nalgebra_svd(a) {
        Some(f) => f,
        None => faer_svd(a)?,
    };
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].abs().total_cmp(&s[i].abs()).then(i.cmp(&j)));
    let u = u.select_columns(order.iter());
    let v = v.select_columns(order.iter());
    let sigma = order.iter().map(|&i| s[i].abs()).collect();
    Ok((u, sigma, v))
}

/// Thin SVD truncated at the numerical rank.
pub fn svd_full(a: &Matrix) -> Result<TruncatedSvd> {
    let (u, sigma, v) = sorted_svd(a)?;
    let tol = rank_tolerance(sigma.first().copied().unwrap_or(0.0), a.nrows(), a.ncols());
    let rho = sigma.iter().take_while(|&&s| s > tol).count();
    Ok(TruncatedSvd {
        u: u.columns(0, rho).into_owned(),
        sigma: DVector::from_iterator(rho, sigma.into_iter().take(rho)),
        v: v.columns(0, rho).into_owned(),
        k_requested: a.nrows().min(a.ncols()),
    })
}

/// Top-`k` singular triplets (fewer if the numerical rank is below `k`).
pub fn svd_truncated(a: &Matrix, k: usize) -> Result<TruncatedSvd> {
    check_rank_arg(a, k)?;
    Ok(svd_full(a)?.truncate(k))
}

fn check_rank_arg(a: &Matrix, k: usize) -> Result<()> {
    let limit = a.nrows().min(a.ncols());
    if k == 0 || k > limit {
        return Err(Error::Argument(format!(
            "rank {k} outside 1..={limit} for a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// All singular values (including those below the rank tolerance), non-increasing.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(sorted_svd(a)?.1)
}

pub fn numerical_rank(a: &Matrix) -> Result<usize> {
    Ok(svd_full(a)?.rank())
}

/// Best rank-`k` approximation `A_k = U_k Σ_k V_k^T`.
pub fn best_rank_k(a: &Matrix, k: usize) -> Result<Matrix> {
    Ok(svd_truncated(a, k)?.reconstruct())
}

/// `||A - A_k||_F`, computed from the trailing singular values.
pub fn tail_frobenius(a: &Matrix, k: usize) -> Result<f64> {
    check_rank_arg(a, k)?;
    let svd = svd_full(a)?;
    Ok(svd.sigma.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt())
}

/// Moore-Penrose inverse through the SVD.
pub fn pinv(a: &Matrix) -> Result<Matrix> {
    let svd = svd_full(a)?;
    let mut v_scaled = svd.v;
    for (j, s) in svd.sigma.iter().enumerate() {
        v_scaled.column_mut(j).scale_mut(1.0 / s);
    }
    Ok(v_scaled * svd.u.transpose())
}

/// Orthonormal basis of the column space of `c`.
pub fn column_basis(c: &Matrix) -> Result<Matrix> {
    if c.ncols() == 0 {
        return Ok(Matrix::zeros(c.nrows(), 0));
    }
    Ok(svd_full(c)?.u)
}

/// `C C^† A`: projection of `a` onto the column space of `c`.
pub fn project_onto_columns(c: &Matrix, a: &Matrix) -> Result<Matrix> {
    if c.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, matrix has {}",
            c.nrows(),
            a.nrows()
        )));
    }
    ensure_finite(a)?;
    let q = column_basis(c)?;
    Ok(&q * (q.transpose() * a))
}

/// `A R^† R`: projection of `a` onto the row space of `r`.
pub fn project_onto_rows(a: &Matrix, r: &Matrix) -> Result<Matrix> {
    if r.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} columns, matrix has {}",
            r.ncols(),
            a.ncols()
        )));
    }
    ensure_finite(a)?;
    if r.nrows() == 0 {
        return Ok(Matrix::zeros(a.nrows(), a.ncols()));
    }
    let v = svd_full(r)?.v;
    Ok((a * &v) * v.transpose())
}

/// Rank-`k` leverage scores.
#[derive(Debug, Clone, PartialEq)]
pub struct LeverageScores {
    pub scores: Vec<f64>,
    pub k: usize,
}

impl LeverageScores {
    pub fn sum(&self) -> f64 {
        self.scores.iter().sum()
    }
}

/// Squared row norms of `V_{A,k}` (columns axis) or `U_{A,k}` (rows axis).
pub fn leverage_scores(a: &Matrix, k: usize, axis: Axis) -> Result<LeverageScores> {
    check_rank_arg(a, k)?;
    let svd = svd_full(a)?;
    if k > svd.rank() {
        return Err(Error::RankDeficient {
            requested: k,
            achieved: svd.rank(),
        });
    }
    let basis = match axis {
        Axis::Rows => svd.u.columns(0, k),
        Axis::Columns => svd.v.columns(0, k),
    };
    let scores = basis.row_iter().map(|row| row.norm_squared()).collect();
    Ok(LeverageScores { scores, k })
}

/// Frobenius, spectral and nuclear norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub frobenius: f64,
    pub spectral: f64,
    pub nuclear: f64,
}

pub fn norms(a: &Matrix) -> Result<Norms> {
    let s = singular_values(a)?;
    Ok(Norms {
        frobenius: a.norm(),
        spectral: s.first().copied().unwrap_or(0.0),
        nuclear: s.iter().sum(),
    })
}

/// Copies the listed columns (duplicates allowed).
pub fn select_columns(a: &Matrix, indices: &[usize]) -> Matrix {
    a.select_columns(indices.iter())
}

pub fn select_rows(a: &Matrix, indices: &[usize]) -> Matrix {
    a.select_rows(indices.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tall_rank_one_reconstructs() {
        let a = crate::synthetic::low_rank(22, 5, 1, 0.0, 16);
        let svd = svd_full(&a).unwrap();
        assert_eq!(svd.rank(), 1);
        assert!((svd.reconstruct() - &a).norm() < 1e-10 * a.norm());
    }

    fn eq3(m: usize, alpha: f64) -> Matrix {
        Matrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { alpha })
    }

    #[test]
    fn identity_singular_values() {
        let svd = svd_full(&Matrix::identity(3, 3)).unwrap();
        assert_eq!(svd.sigma.as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_svd_is_signed_permutation() {
        let a = Matrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0, 2.0]));
        let svd = svd_full(&a).unwrap();
        assert_abs_diff_eq!(svd.sigma.as_slice(), &[3.0, 2.0, 1.0][..], epsilon = 1e-12);
        for m in [&svd.u, &svd.v] {
            for x in m.iter() {
                assert!(x.abs() < 1e-12 || (x.abs() - 1.0).abs() < 1e-12);
            }
        }
        assert!((svd.reconstruct() - a).norm() < 1e-12);
    }

    #[test]
    fn adversarial_matrix_spectrum() {
        let s = svd_full(&eq3(4, 0.5)).unwrap().sigma;
        assert_abs_diff_eq!(s.as_slice(), &[2.5, 0.5, 0.5, 0.5][..], epsilon = 1e-12);
    }

    #[test]
    fn svd_rejects_non_finite_and_empty() {
        let mut a = Matrix::identity(2, 2);
        a[(1, 0)] = f64::NAN;
        assert!(matches!(svd_full(&a), Err(Error::InvalidInput(_))));
        assert!(matches!(svd_full(&Matrix::zeros(0, 3)), Err(Error::InvalidInput(_))));
        assert!(from_row_major(1, 2, &[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn wide_and_tall_reconstruct() {
        let a = Matrix::from_fn(4, 7, |i, j| ((i * 7 + j) as f64).sin());
        for m in [a.clone(), a.transpose()] {
            let svd = svd_full(&m).unwrap();
            assert!((svd.reconstruct() - &m).norm() <= 1e-12 * m.norm());
        }
    }

    #[test]
    fn best_rank_k_exact_rank_returns_input() {
        let a = Matrix::from_fn(5, 4, |i, j| (i + 1) as f64 * (j as f64 - 1.5));
        let a2 = best_rank_k(&a, 2).unwrap();
        assert!((a2 - &a).norm() < 1e-10);
    }

    #[test]
    fn best_rank_k_adversarial_residuals() {
        let b = eq3(4, 0.5);
        let r1 = &b - best_rank_k(&b, 1).unwrap();
        assert_abs_diff_eq!(r1.norm(), 3f64.sqrt() * 0.5, epsilon = 1e-10);
        let r2 = &b - best_rank_k(&b, 2).unwrap();
        assert_abs_diff_eq!(norms(&r2).unwrap().nuclear, 1.0, epsilon = 1e-10);
        assert!(matches!(best_rank_k(&b, 5), Err(Error::Argument(_))));
        assert!(matches!(best_rank_k(&b, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn pinv_examples() {
        assert!((pinv(&Matrix::identity(3, 3)).unwrap() - Matrix::identity(3, 3)).norm() < 1e-14);
        let d = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let expected = Matrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.0]);
        assert!((pinv(&d).unwrap() - expected).norm() < 1e-14);
        let g = Matrix::from_fn(6, 3, |i, j| ((i + 2 * j) as f64).cos() + if i == j { 2.0 } else { 0.0 });
        let left = pinv(&g).unwrap() * &g;
        assert!((left - Matrix::identity(3, 3)).norm() < 1e-8);
    }

    #[test]
    fn projection_examples() {
        let a = Matrix::from_fn(3, 3, |i, j| (i + 1) as f64 * (j + 2) as f64);
        assert!((project_onto_columns(&a, &a).unwrap() - &a).norm() < 1e-10);
        let first = a.columns(0, 1).into_owned();
        assert!((project_onto_columns(&first, &a).unwrap() - &a).norm() < 1e-10);
        let e1 = Matrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let e2 = Matrix::from_column_slice(2, 1, &[0.0, 1.0]);
        assert!(project_onto_columns(&e1, &e2).unwrap().norm() < 1e-15);
        assert!(matches!(
            project_onto_columns(&e1, &Matrix::zeros(3, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn row_projection_mirrors_column_projection() {
        let a = Matrix::from_fn(3, 3, |i, j| (i + 2) as f64 * (j + 1) as f64);
        assert!((project_onto_rows(&a, &a).unwrap() - &a).norm() < 1e-10);
        let first = a.rows(0, 1).into_owned();
        assert!((project_onto_rows(&a, &first).unwrap() - &a).norm() < 1e-10);
        let e1 = Matrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let e2 = Matrix::from_row_slice(1, 2, &[0.0, 1.0]);
        assert!(project_onto_rows(&e2, &e1).unwrap().norm() < 1e-15);
        assert!(project_onto_rows(&a, &e1).is_err());
    }

    #[test]
    fn leverage_examples() {
        let lev = leverage_scores(&Matrix::identity(4, 4), 4, Axis::Columns).unwrap();
        assert_abs_diff_eq!(lev.scores.as_slice(), &[1.0; 4][..], epsilon = 1e-12);

        // columns e1, e1, e2: the duplicated direction splits its unit score
        let a = Matrix::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let lev = leverage_scores(&a, 2, Axis::Columns).unwrap();
        assert_abs_diff_eq!(lev.scores.as_slice(), &[0.5, 0.5, 1.0][..], epsilon = 1e-12);

        let lev = leverage_scores(&eq3(4, 0.5), 1, Axis::Columns).unwrap();
        assert_abs_diff_eq!(lev.scores.as_slice(), &[0.25; 4][..], epsilon = 1e-12);
        let rows = leverage_scores(&eq3(4, 0.5), 1, Axis::Rows).unwrap();
        assert_abs_diff_eq!(rows.sum(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn leverage_rank_error_names_achieved_rank() {
        let a = Matrix::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        match leverage_scores(&a, 2, Axis::Columns) {
            Err(Error::RankDeficient { requested, achieved }) => {
                assert_eq!((requested, achieved), (2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn adversarial_norm_triple() {
        let n = norms(&eq3(4, 0.5)).unwrap();
        assert_abs_diff_eq!(n.nuclear, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.spectral, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(n.frobenius, 7f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = Matrix::zeros(3, 2);
        assert_eq!(numerical_rank(&z).unwrap(), 0);
        assert_eq!(pinv(&z).unwrap(), Matrix::zeros(2, 3));
        assert_eq!(project_onto_columns(&z, &Matrix::identity(3, 3)).unwrap(), Matrix::zeros(3, 3));
    }
}
