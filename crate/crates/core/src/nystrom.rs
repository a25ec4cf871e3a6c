//! Nyström approximations `A ~ C U C^T` of symmetric matrices.

use rand::Rng;
use rayon::prelude::*;

use crate::colselect::{near_optimal_select, ColSelectParams};
use crate::matcore::{self, Axis, Matrix};
use crate::sampling::{self, SamplingDistribution, Selection};
use crate::{Error, Result};

/// Relative Frobenius tolerance for accepting a matrix as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NystromVariant {
    /// `U = W^†`
    Standard,
    /// `U = (W_k)^†`
    StandardRankK(usize),
    /// Weighted sum of standard models over several samples.
    Ensemble,
    /// `U = C^† A (C^†)^T`
    Modified,
}

impl NystromVariant {
    pub fn name(self) -> &'static str {
        match self {
            NystromVariant::Standard => "standard",
            NystromVariant::StandardRankK(_) => "standard-k",
            NystromVariant::Ensemble => "ensemble",
            NystromVariant::Modified => "modified",
        }
    }
}

/// `C U C^T`. Ensembles store `C = [C_1 .. C_t]` and a block-diagonal `U`.
#[derive(Debug, Clone)]
pub struct NystromApproximation {
    pub col_indices: Vec<usize>,
    pub c: Matrix,
    pub u: Matrix,
    pub variant: NystromVariant,
    pub weights: Option<Vec<f64>>,
}

impl NystromApproximation {
    pub fn reconstruct(&self) -> Matrix {
        let cu = &self.c * &self.u;
        cu * self.c.transpose()
    }

    pub fn residual(&self, a: &Matrix) -> Matrix {
        a - self.reconstruct()
    }

    pub fn residual_frobenius(&self, a: &Matrix) -> f64 {
        self.residual(a).norm()
    }
}

/// Returns `(A + A^T)/2`, or an error when `A` is not symmetric within [`SYMMETRY_TOL`].
pub fn symmetrized(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Argument(format!("expected a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    matcore::ensure_finite(a)?;
    let skew = (a - a.transpose()).norm();
    if skew > SYMMETRY_TOL * a.norm() {
        return Err(Error::Argument(format!(
            "matrix is not symmetric: ||A - A^T||_F = {skew:.3e}"
        )));
    }
    Ok((a + a.transpose()) * 0.5)
}

fn symmetric_part(u: Matrix) -> Matrix {
    (&u + u.transpose()) * 0.5
}

/// `C = A S D`, `W = (S D)^T A (S D)`, `U = W^†` (or `(W_k)^†` when `rank` is given).
pub fn standard_nystrom(a: &Matrix, sel: &Selection, rank: Option<usize>) -> Result<NystromApproximation> {
    let a = symmetrized(a)?;
    sel.validate(a.ncols())?;
    if sel.is_empty() {
        return Err(Error::Argument("empty column selection".into()));
    }
    let c = sel.columns_of(&a);
    let w = sel.rows_of(&c);
    let (u, variant) = match rank {
        None => (matcore::pinv(&w)?, NystromVariant::Standard),
        Some(k) => (
            matcore::pinv(&matcore::best_rank_k(&w, k)?)?,
            NystromVariant::StandardRankK(k),
        ),
    };
    Ok(NystromApproximation {
        col_indices: sel.indices.clone(),
        c,
        u: symmetric_part(u),
        variant,
        weights: None,
    })
}

/// `sum_i mu_i C_i W_i^† C_i^T`; weights default to `1/t`.
pub fn ensemble_nystrom(
    a: &Matrix,
    samples: &[Selection],
    weights: Option<&[f64]>,
) -> Result<NystromApproximation> {
    let t = samples.len();
    if t == 0 {
        return Err(Error::Argument("ensemble needs at least one sample".into()));
    }
    let size = samples[0].len();
    if samples.iter().any(|s| s.len() != size) {
        return Err(Error::Argument("ensemble samples must share one size".into()));
    }
    let mu: Vec<f64> = match weights {
        None => vec![1.0 / t as f64; t],
        Some(w) => {
            if w.len() != t {
                return Err(Error::Argument(format!("{} weights for {t} samples", w.len())));
            }
            let total: f64 = w.iter().sum();
            if w.iter().any(|x| !(*x >= 0.0)) || (total - 1.0).abs() > 1e-10 {
                return Err(Error::Argument("ensemble weights must be non-negative and sum to 1".into()));
            }
            w.to_vec()
        }
    };
    let mut c = Matrix::zeros(a.nrows(), size * t);
    let mut u = Matrix::zeros(size * t, size * t);
    let mut col_indices = Vec::with_capacity(size * t);
    for (i, (sel, m)) in samples.iter().zip(&mu).enumerate() {
        let part = standard_nystrom(a, sel, None)?;
        c.columns_mut(i * size, size).copy_from(&part.c);
        u.view_mut((i * size, i * size), (size, size)).copy_from(&(part.u * *m));
        col_indices.extend_from_slice(&sel.indices);
    }
    Ok(NystromApproximation {
        col_indices,
        c,
        u,
        variant: NystromVariant::Ensemble,
        weights: Some(mu),
    })
}

/// `U = C^† A (C^†)^T`.
pub fn modified_nystrom(a: &Matrix, sel: &Selection) -> Result<NystromApproximation> {
    let a = symmetrized(a)?;
    sel.validate(a.ncols())?;
    if sel.is_empty() {
        return Err(Error::Argument("empty column selection".into()));
    }
    let c = sel.columns_of(&a);
    modified_from_columns(&a, c, sel.indices.clone())
}

fn modified_from_columns(a: &Matrix, c: Matrix, col_indices: Vec<usize>) -> Result<NystromApproximation> {
    let c_pinv = matcore::pinv(&c)?;
    let u = &c_pinv * a * c_pinv.transpose();
    Ok(NystromApproximation {
        col_indices,
        c,
        u: symmetric_part(u),
        variant: NystromVariant::Modified,
        weights: None,
    })
}

/// Builds the requested variant from one selection (ensembles are not single-selection).
pub fn from_selection(a: &Matrix, sel: &Selection, variant: NystromVariant) -> Result<NystromApproximation> {
    match variant {
        NystromVariant::Standard => standard_nystrom(a, sel, None),
        NystromVariant::StandardRankK(k) => standard_nystrom(a, sel, Some(k)),
        NystromVariant::Modified => modified_nystrom(a, sel),
        NystromVariant::Ensemble => ensemble_nystrom(a, std::slice::from_ref(sel), None),
    }
}

/// Sample sizes for [`adaptive_modified_nystrom`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveNystromPlan {
    pub columns: ColSelectParams,
    /// `c2` columns sampled from the residual `A - C1 C1^† A`.
    pub adaptive: usize,
}

impl AdaptiveNystromPlan {
    /// `c1 = ceil(2k/eps * 1.25)` near-optimal columns and `c2 = ceil(c1/eps)` adaptive ones.
    pub fn from_epsilon(k: usize, epsilon: f64) -> Result<Self> {
        let columns = ColSelectParams::new(k, epsilon)?;
        let adaptive = (columns.total() as f64 / epsilon).ceil() as usize;
        Ok(Self { columns, adaptive })
    }

    /// A total of `c` columns, split evenly between the two stages (`c1 = ceil(c/2)`).
    pub fn from_total(k: usize, c: usize) -> Result<Self> {
        let c1 = c.div_ceil(2);
        let columns = ColSelectParams::from_total(k, c1)?;
        Ok(Self {
            columns,
            adaptive: c - c1,
        })
    }

    pub fn c(&self) -> usize {
        self.columns.total() + self.adaptive
    }
}

/// Near-optimal columns followed by adaptive columns, with the modified intersection matrix.
pub fn adaptive_modified_nystrom<R: Rng + ?Sized>(
    a: &Matrix,
    plan: &AdaptiveNystromPlan,
    rng: &mut R,
) -> Result<NystromApproximation> {
    let a = symmetrized(a)?;
    let m = a.nrows();
    if plan.c() >= m {
        return Err(Error::Argument(format!(
            "{} columns requested from a {m}x{m} matrix",
            plan.c()
        )));
    }
    let first = near_optimal_select(&a, &plan.columns, rng)?;
    let mut indices = first.selection.indices;
    if plan.adaptive > 0 {
        let extra = sampling::adaptive_sample(&a, &first.c, Axis::Columns, plan.adaptive, rng)?;
        indices.extend(extra.indices);
    }
    let c = matcore::select_columns(&a, &indices);
    modified_from_columns(&a, c, indices)
}

/// Leverage-score sampling with replacement, scaled columns and `U = W^†`.
pub fn subspace_nystrom<R: Rng + ?Sized>(
    a: &Matrix,
    k: usize,
    c: usize,
    rng: &mut R,
) -> Result<NystromApproximation> {
    let a = symmetrized(a)?;
    let dist = sampling::subspace_distribution(&a, k, Axis::Columns)?;
    let sample = sampling::build_scaled_selection(&a, &dist, c, rng)?;
    Ok(NystromApproximation {
        col_indices: sample.selection.indices,
        c: sample.c,
        u: symmetric_part(matcore::pinv(&sample.w)?),
        variant: NystromVariant::Standard,
        weights: None,
    })
}

/// `c` distinct columns chosen uniformly at random.
pub fn uniform_selection<R: Rng + ?Sized>(n: usize, c: usize, rng: &mut R) -> Result<Selection> {
    sampling::sample_without_replacement(&SamplingDistribution::uniform(n), c, rng)
}

/// Uniformly sampled columns with the given intersection-matrix variant.
pub fn uniform_nystrom<R: Rng + ?Sized>(
    a: &Matrix,
    c: usize,
    variant: NystromVariant,
    rng: &mut R,
) -> Result<NystromApproximation> {
    let sel = uniform_selection(a.ncols(), c, rng)?;
    from_selection(a, &sel, variant)
}

/// `t` disjoint uniform samples of `c` columns each.
pub fn disjoint_uniform_samples<R: Rng + ?Sized>(
    n: usize,
    c: usize,
    t: usize,
    rng: &mut R,
) -> Result<Vec<Selection>> {
    let all = uniform_selection(n, c * t, rng)?;
    Ok(all
        .indices
        .chunks(c)
        .map(|ch| Selection::unscaled(ch.to_vec()))
        .collect())
}

/// Outcome of [`boosted_run`].
#[derive(Debug, Clone)]
pub struct Boosted<T> {
    pub best: T,
    pub best_seed: u64,
    /// Errors of every run, in seed order.
    pub errors: Vec<f64>,
}

impl<T> Boosted<T> {
    pub fn best_error(&self) -> f64 {
        self.errors
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Runs `run(seed + i)` for `i in 0..repeats` in parallel and keeps the smallest error.
///
/// Ties go to the lowest seed.
pub fn boosted_run<T, F>(repeats: usize, seed: u64, run: F) -> Result<Boosted<T>>
where
    T: Send,
    F: Fn(u64) -> Result<(T, f64)> + Sync,
{
    if repeats == 0 {
        return Err(Error::Argument("repeats must be at least 1".into()));
    }
    let outcomes: Vec<(T, f64)> = (0..repeats as u64)
        .into_par_iter()
        .map(|i| run(seed.wrapping_add(i)))
        .collect::<Result<_>>()?;
    let mut best_i = 0;
    for (i, (_, e)) in outcomes.iter().enumerate() {
        if *e < outcomes[best_i].1 {
            best_i = i;
        }
    }
    let errors: Vec<f64> = outcomes.iter().map(|(_, e)| *e).collect();
    let best = outcomes.into_iter().nth(best_i).map(|(t, _)| t).expect("repeats >= 1");
    Ok(Boosted {
        best,
        best_seed: seed.wrapping_add(best_i as u64),
        errors,
    })
}

/// `((1 + eps) / (1 + s eps))^t`: Markov bound on every one of `t` runs exceeding `1 + s eps`.
pub fn boosting_failure_bound(epsilon: f64, s: f64, t: u32) -> f64 {
    ((1.0 + epsilon) / (1.0 + s * epsilon)).powi(t as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rng_from_seed, synthetic};
    use approx::assert_abs_diff_eq;

    fn eq3(m: usize, alpha: f64) -> Matrix {
        Matrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { alpha })
    }

    #[test]
    fn rank_one_exact() {
        let v = nalgebra::DVector::from_fn(6, |i, _| (i + 1) as f64);
        let a = &v * v.transpose();
        let sel = Selection::unscaled(vec![3]);
        assert!(standard_nystrom(&a, &sel, None).unwrap().residual_frobenius(&a) < 1e-10);
        assert!(modified_nystrom(&a, &sel).unwrap().residual_frobenius(&a) < 1e-10);
    }

    #[test]
    fn eq3_single_column_residual() {
        let a = eq3(4, 0.5);
        let approx = standard_nystrom(&a, &Selection::unscaled(vec![0]), None).unwrap();
        let res = approx.residual(&a);
        let eta = 0.25;
        for i in 1..4 {
            for j in 1..4 {
                let expect = if i == j { 1.0 - eta } else { 0.5 - eta };
                assert_abs_diff_eq!(res[(i, j)], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn eq3_spectral_residual() {
        let a = eq3(100, 0.8);
        let sel = Selection::unscaled((0..20).collect());
        let res = standard_nystrom(&a, &sel, None).unwrap().residual(&a);
        let s = matcore::singular_values(&res).unwrap()[0];
        assert_abs_diff_eq!(s, 0.2 * 100.25 / 20.25, epsilon = 1e-8);
        let modified = modified_nystrom(&a, &sel).unwrap().residual_frobenius(&a);
        assert!(modified < res.norm());
    }

    #[test]
    fn ensemble_degenerate_cases() {
        let a = synthetic::spsd_low_rank(12, 5, 2);
        let sel = Selection::unscaled(vec![1, 4, 7]);
        let single = standard_nystrom(&a, &sel, None).unwrap().reconstruct();
        let one = ensemble_nystrom(&a, std::slice::from_ref(&sel), None).unwrap().reconstruct();
        let two = ensemble_nystrom(&a, &[sel.clone(), sel.clone()], None).unwrap().reconstruct();
        assert!((&single - one).norm() < 1e-10);
        assert!((&single - two).norm() < 1e-10);
        assert!(ensemble_nystrom(&a, &[sel.clone(), sel.clone()], Some(&[1.0])).is_err());
        assert!(ensemble_nystrom(&a, &[sel.clone(), sel], Some(&[0.7, 0.7])).is_err());
    }

    #[test]
    fn asymmetric_rejected() {
        let mut a = eq3(5, 0.3);
        a[(0, 1)] = 2.0;
        let sel = Selection::unscaled(vec![0]);
        assert!(matches!(standard_nystrom(&a, &sel, None), Err(Error::Argument(_))));
        assert!(matches!(modified_nystrom(&a, &sel), Err(Error::Argument(_))));
    }

    #[test]
    fn modified_all_columns_exact() {
        let a = synthetic::gaussian(7, 7, 1);
        let a = &a + a.transpose();
        let sel = Selection::unscaled((0..7).collect());
        assert!(modified_nystrom(&a, &sel).unwrap().residual_frobenius(&a) < 1e-10);
    }

    #[test]
    fn rank_restricted() {
        let a = eq3(10, 0.5);
        let sel = Selection::unscaled(vec![0, 1, 2]);
        let approx = standard_nystrom(&a, &sel, Some(1)).unwrap();
        assert_eq!(approx.variant, NystromVariant::StandardRankK(1));
        assert_eq!(matcore::numerical_rank(&approx.reconstruct()).unwrap(), 1);
    }

    #[test]
    fn adaptive_low_rank_exact() {
        let a = synthetic::spsd_low_rank(60, 3, 4);
        let plan = AdaptiveNystromPlan::from_total(3, 16).unwrap();
        let approx = adaptive_modified_nystrom(&a, &plan, &mut rng_from_seed(2)).unwrap();
        assert!(approx.residual_frobenius(&a) < 1e-8 * a.norm());
        assert!(approx.c.ncols() <= plan.c());
        let r = approx.reconstruct();
        assert!((&r - r.transpose()).norm() < 1e-10 * r.norm());
    }

    #[test]
    fn adaptive_plan_sizes() {
        let p = AdaptiveNystromPlan::from_epsilon(10, 0.7).unwrap();
        assert_eq!(p.columns.total(), 40);
        assert_eq!(p.adaptive, 58);
        let p = AdaptiveNystromPlan::from_total(10, 40).unwrap();
        assert_eq!((p.columns.total(), p.adaptive), (20, 20));
        let big = AdaptiveNystromPlan::from_epsilon(10, 0.5).unwrap();
        assert!(adaptive_modified_nystrom(&Matrix::identity(50, 50), &big, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn subspace_identity_and_scaling() {
        let a = Matrix::identity(5, 5);
        let approx = subspace_nystrom(&a, 5, 5, &mut rng_from_seed(1)).unwrap();
        assert_eq!(approx.c.ncols(), 5);
        let sel = uniform_selection(5, 5, &mut rng_from_seed(1)).unwrap();
        assert!(standard_nystrom(&a, &sel, None).unwrap().residual_frobenius(&a) < 1e-12);
    }

    #[test]
    fn boosting_picks_min_with_low_seed_ties() {
        let b = boosted_run(5, 10, |s| Ok((s, if s == 12 || s == 13 { 0.5 } else { 1.0 }))).unwrap();
        assert_eq!(b.best, 12);
        assert_eq!(b.best_seed, 12);
        assert_eq!(b.errors, vec![1.0, 1.0, 0.5, 0.5, 1.0]);
        let one = boosted_run(1, 3, |s| Ok((s, 2.0))).unwrap();
        assert_eq!(one.best, 3);
        assert!(boosted_run(0, 0, |s| Ok((s, 0.0))).is_err());
        assert_abs_diff_eq!(boosting_failure_bound(0.5, 2.0, 9), 0.75f64.powi(9), epsilon = 1e-15);
    }

    #[test]
    fn disjoint_samples() {
        let s = disjoint_uniform_samples(20, 4, 3, &mut rng_from_seed(5)).unwrap();
        let mut all: Vec<usize> = s.iter().flat_map(|x| x.indices.clone()).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 12);
        assert!(disjoint_uniform_samples(10, 4, 3, &mut rng_from_seed(5)).is_err());
    }
}
