//! CUR decompositions `A ~ C U R` and the error ratio used to compare them.

use rand::Rng;

use crate::colselect::{near_optimal_select, ColSelectParams};
use crate::matcore::{self, Axis, Matrix};
use crate::sampling::{self, SamplingDistribution, Selection};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurMethod {
    Adaptive,
    Subspace,
    Uniform,
}

impl CurMethod {
    pub fn name(self) -> &'static str {
        match self {
            CurMethod::Adaptive => "adaptive",
            CurMethod::Subspace => "subspace",
            CurMethod::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurDecomposition {
    pub col_indices: Vec<usize>,
    pub row_indices: Vec<usize>,
    /// `m x c`
    pub c: Matrix,
    /// `r x n`
    pub r: Matrix,
    /// `c x r`
    pub u: Matrix,
    pub method: CurMethod,
}

impl CurDecomposition {
    pub fn reconstruct(&self) -> Matrix {
        &self.c * (&self.u * &self.r)
    }

    pub fn residual_frobenius(&self, a: &Matrix) -> f64 {
        (a - self.reconstruct()).norm()
    }
}

/// `U = C^† A R^†`, formed one column of `A` at a time.
pub fn intersection(c: &Matrix, a: &Matrix, r: &Matrix) -> Result<Matrix> {
    if c.nrows() != a.nrows() || r.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "C is {}x{}, A is {}x{}, R is {}x{}",
            c.nrows(),
            c.ncols(),
            a.nrows(),
            a.ncols(),
            r.nrows(),
            r.ncols()
        )));
    }
    let c_pinv = matcore::pinv(c)?;
    let mut cta = Matrix::zeros(c.ncols(), a.ncols());
    for (j, col) in a.column_iter().enumerate() {
        cta.set_column(j, &(&c_pinv * col));
    }
    Ok(cta * matcore::pinv(r)?)
}

/// Sample sizes for [`adaptive_cur`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveCurPlan {
    pub columns: ColSelectParams,
    /// Near-optimal selection applied to `A^T` for the first `r1 = c` rows.
    pub rows: ColSelectParams,
    /// `r2` rows sampled from the residual `A - A R1^† R1`.
    pub adaptive_rows: usize,
}

impl AdaptiveCurPlan {
    /// `c = ceil(2k/eps * 1.25)` columns, `r1 = c` and `r2 = ceil(c/eps)` rows.
    pub fn from_epsilon(k: usize, epsilon: f64) -> Result<Self> {
        let columns = ColSelectParams::new(k, epsilon)?;
        let adaptive_rows = (columns.total() as f64 / epsilon).ceil() as usize;
        Ok(Self {
            columns,
            rows: columns,
            adaptive_rows,
        })
    }

    /// Exactly `c` columns and `r >= c` rows in total.
    pub fn from_counts(k: usize, c: usize, r: usize) -> Result<Self> {
        if r < c {
            return Err(Error::Argument(format!("need r >= c, got c={c}, r={r}")));
        }
        let columns = ColSelectParams::from_total(k, c)?;
        Ok(Self {
            columns,
            rows: columns,
            adaptive_rows: r - c,
        })
    }

    pub fn c(&self) -> usize {
        self.columns.total()
    }

    pub fn r(&self) -> usize {
        self.rows.total() + self.adaptive_rows
    }

    /// Smallest `(m, n)` this plan can run on.
    pub fn min_shape(&self) -> (usize, usize) {
        ((self.rows.total() + 1).max(self.r()), self.c() + 1)
    }

    pub fn check_shape(&self, m: usize, n: usize) -> Result<()> {
        let (min_m, min_n) = self.min_shape();
        if m < min_m || n < min_n {
            return Err(Error::Argument(format!(
                "c={} and r={} need at least a {min_m}x{min_n} matrix, got {m}x{n}",
                self.c(),
                self.r()
            )));
        }
        Ok(())
    }
}

/// Adaptive-sampling CUR: near-optimal columns, near-optimal rows, then adaptive rows.
pub fn adaptive_cur<R: Rng + ?Sized>(
    a: &Matrix,
    plan: &AdaptiveCurPlan,
    rng: &mut R,
) -> Result<CurDecomposition> {
    plan.check_shape(a.nrows(), a.ncols())?;
    let cols = near_optimal_select(a, &plan.columns, rng)?;
    let at = a.transpose();
    let rows1 = near_optimal_select(&at, &plan.rows, rng)?;
    let r1 = rows1.c.transpose();
    let mut row_indices = rows1.selection.indices;
    if plan.adaptive_rows > 0 {
        let extra = sampling::adaptive_sample(a, &r1, Axis::Rows, plan.adaptive_rows, rng)?;
        row_indices.extend(extra.indices);
    }
    let r = matcore::select_rows(a, &row_indices);
    let u = intersection(&cols.c, a, &r)?;
    Ok(CurDecomposition {
        col_indices: cols.selection.indices,
        row_indices,
        c: cols.c,
        r,
        u,
        method: CurMethod::Adaptive,
    })
}

/// [`adaptive_cur`] with the sample sizes derived from `(k, eps)` and a seed.
pub fn adaptive_cur_eps(a: &Matrix, k: usize, epsilon: f64, seed: u64) -> Result<CurDecomposition> {
    let plan = AdaptiveCurPlan::from_epsilon(k, epsilon)?;
    adaptive_cur(a, &plan, &mut crate::rng_from_seed(seed))
}

fn check_counts(a: &Matrix, c: usize, r: usize) -> Result<()> {
    let (m, n) = a.shape();
    if c == 0 || r == 0 || c > n || r > m {
        return Err(Error::Argument(format!(
            "c={c}, r={r} outside 1..={n} columns and 1..={m} rows"
        )));
    }
    Ok(())
}

/// Leverage-score baseline: `c` columns by rank-`k` column leverage of `A`, then `r` rows
/// by row leverage of `C`, both without replacement; `U = W^†` with `W` the scaled rows of `C`.
pub fn subspace_cur<R: Rng + ?Sized>(
    a: &Matrix,
    k: usize,
    c: usize,
    r: usize,
    rng: &mut R,
) -> Result<CurDecomposition> {
    check_counts(a, c, r)?;
    let col_dist = sampling::subspace_distribution(a, k, Axis::Columns)?;
    let col_sel = sampling::sample_without_replacement(&col_dist, c, rng)?;
    let cmat = col_sel.columns_of(a);

    let rank_c = matcore::numerical_rank(&cmat)?.min(c);
    let row_dist = sampling::subspace_distribution(&cmat, rank_c, Axis::Rows)?;
    let mut row_sel = sampling::sample_without_replacement(&row_dist, r, rng)?;
    row_sel.scaling = Some(
        row_sel
            .indices
            .iter()
            .map(|&i| 1.0 / (r as f64 * row_dist.probs()[i]).sqrt())
            .collect(),
    );
    let w = row_sel.rows_of(&cmat);
    let rmat = row_sel.rows_of(a);
    Ok(CurDecomposition {
        col_indices: col_sel.indices,
        row_indices: row_sel.indices,
        c: cmat,
        r: rmat,
        u: matcore::pinv(&w)?,
        method: CurMethod::Subspace,
    })
}

/// Uniform baseline: columns and rows uniformly without replacement, `U = C^† A R^†`.
pub fn uniform_cur<R: Rng + ?Sized>(
    a: &Matrix,
    c: usize,
    r: usize,
    rng: &mut R,
) -> Result<CurDecomposition> {
    check_counts(a, c, r)?;
    let col_sel: Selection =
        sampling::sample_without_replacement(&SamplingDistribution::uniform(a.ncols()), c, rng)?;
    let row_sel = sampling::sample_without_replacement(&SamplingDistribution::uniform(a.nrows()), r, rng)?;
    let cmat = col_sel.columns_of(a);
    let rmat = row_sel.rows_of(a);
    let u = intersection(&cmat, a, &rmat)?;
    Ok(CurDecomposition {
        col_indices: col_sel.indices,
        row_indices: row_sel.indices,
        c: cmat,
        r: rmat,
        u,
        method: CurMethod::Uniform,
    })
}

/// `||A - A_k||_F` cached for repeated error-ratio evaluations against one matrix.
#[derive(Debug, Clone)]
pub struct ErrorRatio {
    tail: f64,
    k: usize,
}

impl ErrorRatio {
    pub fn new(a: &Matrix, k: usize) -> Result<Self> {
        let tail = matcore::tail_frobenius(a, k)?;
        let floor = a.norm() * f64::EPSILON * a.nrows().max(a.ncols()) as f64;
        if !(tail > floor) {
            return Err(Error::Argument(format!(
                "||A - A_{k}||_F vanishes; the error ratio is undefined"
            )));
        }
        Ok(Self { tail, k })
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn of(&self, a: &Matrix, approx: &Matrix) -> Result<f64> {
        if a.shape() != approx.shape() {
            return Err(Error::DimensionMismatch(format!(
                "approximation is {}x{}, matrix is {}x{}",
                approx.nrows(),
                approx.ncols(),
                a.nrows(),
                a.ncols()
            )));
        }
        Ok((a - approx).norm() / self.tail)
    }
}

/// `||A - approx||_F / ||A - A_k||_F`.
pub fn error_ratio(a: &Matrix, approx: &Matrix, k: usize) -> Result<f64> {
    ErrorRatio::new(a, k)?.of(a, approx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rng_from_seed, synthetic};
    use approx::assert_abs_diff_eq;

    #[test]
    fn error_ratio_examples() {
        let a = synthetic::decaying_spectrum(12, 10, 0.7, 1);
        let ak = matcore::best_rank_k(&a, 3).unwrap();
        assert_abs_diff_eq!(error_ratio(&a, &ak, 3).unwrap(), 1.0, epsilon = 1e-10);
        assert_eq!(error_ratio(&a, &a, 3).unwrap(), 0.0);
        let zero = Matrix::zeros(12, 10);
        let expect = a.norm() / matcore::tail_frobenius(&a, 3).unwrap();
        assert_abs_diff_eq!(error_ratio(&a, &zero, 3).unwrap(), expect, epsilon = 1e-12);
        let low = synthetic::low_rank(8, 8, 2, 0.0, 2);
        assert!(matches!(error_ratio(&low, &zero.view((0, 0), (8, 8)).into_owned(), 2), Err(Error::Argument(_))));
    }

    #[test]
    fn full_spans_reproduce_a() {
        let a = synthetic::gaussian(6, 5, 3);
        let u = intersection(&a, &a, &a).unwrap();
        assert!((&a * u * &a - &a).norm() < 1e-10);
    }

    #[test]
    fn adaptive_recovers_low_rank() {
        let a = synthetic::low_rank(60, 50, 3, 0.0, 7);
        let plan = AdaptiveCurPlan::from_counts(3, 10, 20).unwrap();
        let cur = adaptive_cur(&a, &plan, &mut rng_from_seed(1)).unwrap();
        assert!(cur.residual_frobenius(&a) < 1e-8 * a.norm());
        assert_eq!(cur.c.ncols(), cur.col_indices.len());
        assert!(cur.r.nrows() <= 20 && cur.c.ncols() <= 10);
        for (p, &j) in cur.col_indices.iter().enumerate() {
            assert_eq!(cur.c.column(p), a.column(j));
        }
    }

    #[test]
    fn plan_reports_min_shape() {
        let plan = AdaptiveCurPlan::from_epsilon(5, 0.5).unwrap();
        assert_eq!(plan.c(), 26);
        assert_eq!(plan.r(), 26 + 52);
        let err = plan.check_shape(50, 20).unwrap_err().to_string();
        assert!(err.contains("78x27"), "{err}");
        assert!(adaptive_cur_eps(&Matrix::zeros(50, 20), 5, 0.5, 0).is_err());
    }

    #[test]
    fn subspace_identity_exact() {
        let a = Matrix::identity(10, 10);
        let cur = subspace_cur(&a, 10, 10, 10, &mut rng_from_seed(3)).unwrap();
        assert!(cur.residual_frobenius(&a) < 1e-10);
    }

    #[test]
    fn subspace_w_is_scaled_intersection() {
        let a = synthetic::decaying_spectrum(30, 25, 0.8, 4);
        let cur = subspace_cur(&a, 4, 8, 12, &mut rng_from_seed(5)).unwrap();
        let w = matcore::pinv(&cur.u).unwrap();
        assert_eq!(w.shape(), (12, 8));
        for (p, &i) in cur.row_indices.iter().enumerate() {
            let d = cur.r[(p, 0)] / a[(i, 0)];
            for (q, &j) in cur.col_indices.iter().enumerate() {
                assert_abs_diff_eq!(w[(p, q)], d * a[(i, j)], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn uniform_counts_checked() {
        let a = synthetic::gaussian(6, 5, 3);
        assert!(uniform_cur(&a, 6, 2, &mut rng_from_seed(0)).is_err());
        let cur = uniform_cur(&a, 5, 6, &mut rng_from_seed(0)).unwrap();
        assert!(cur.residual_frobenius(&a) < 1e-10);
    }
}
