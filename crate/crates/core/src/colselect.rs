//! Near-optimal column selection: randomized SVD, dual-set sparsification, then
//! adaptive sampling from the residual.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dualset::{dual_set_sparsify, DualSetInput};
use crate::matcore::{self, Axis, Matrix};
use crate::sampling::{self, Selection};
use crate::{Error, Result};

/// Extra dual-set columns, as a fraction of `2k/eps`.
pub const DEFAULT_SLACK: f64 = 0.25;

/// Rank-`k` factors from a randomized range finder.
#[derive(Debug, Clone)]
pub struct ApproxSvd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl ApproxSvd {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }
}

/// Randomized truncated SVD with a Gaussian test matrix of width `k + oversample`.
///
/// The oversampling is clamped so the sketch never exceeds `min(m, n)` columns.
pub fn randomized_svd<R: Rng + ?Sized>(
    a: &Matrix,
    k: usize,
    oversample: usize,
    power_iters: usize,
    rng: &mut R,
) -> Result<ApproxSvd> {
    matcore::ensure_finite(a)?;
    let (m, n) = a.shape();
    let limit = m.min(n);
    if k == 0 || k > limit {
        return Err(Error::Argument(format!("rank {k} outside 1..={limit} for a {m}x{n} matrix")));
    }
    let width = k + oversample.min(limit - k);
    let omega = Matrix::from_fn(n, width, |_, _| StandardNormal.sample(rng));
    let mut q = (a * omega).qr().q();
    for _ in 0..power_iters {
        let z = a.tr_mul(&q).qr().q();
        q = (a * z).qr().q();
    }
    let b = q.tr_mul(a);
    let (ub, sigma, v) = matcore::sorted_svd(&b)?;
    Ok(ApproxSvd {
        u: (q * ub).columns(0, k).into_owned(),
        sigma: sigma[..k].to_vec(),
        v: v.columns(0, k).into_owned(),
    })
}

/// Column counts for the two phases of the selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColSelectParams {
    pub k: usize,
    /// Target nonzero count handed to dual-set sparsification.
    pub dual_count: usize,
    /// Columns drawn from the residual.
    pub adaptive_count: usize,
    pub oversample: usize,
    pub power_iters: usize,
}

impl ColSelectParams {
    /// `c2 = ceil(2k/eps)` adaptive columns plus `ceil(2k/eps * 1.25) - c2` dual-set columns.
    pub fn new(k: usize, epsilon: f64) -> Result<Self> {
        Self::with_slack(k, epsilon, DEFAULT_SLACK)
    }

    pub fn with_slack(k: usize, epsilon: f64, slack: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Argument(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        if !(slack >= 0.0) {
            return Err(Error::Argument(format!("slack must be non-negative, got {slack}")));
        }
        let base = 2.0 * k as f64 / epsilon;
        let adaptive = base.ceil() as usize;
        let total = (base * (1.0 + slack)).ceil() as usize;
        // the dual-set step needs strictly more than k targets
        let dual = (total - adaptive).max(k + 1);
        Self::from_counts(k, dual, adaptive)
    }

    /// Splits a total budget `c` the same way [`ColSelectParams::new`] would.
    pub fn from_total(k: usize, c: usize) -> Result<Self> {
        if c < k + 2 {
            return Err(Error::Argument(format!("need at least k + 2 = {} columns, got {c}", k + 2)));
        }
        let adaptive = (c as f64 / (1.0 + DEFAULT_SLACK)).floor() as usize;
        let dual = (c - adaptive).max(k + 1);
        Self::from_counts(k, dual, c - dual)
    }

    pub fn from_counts(k: usize, dual_count: usize, adaptive_count: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Argument(format!("target rank must be at least 2, got {k}")));
        }
        if dual_count <= k {
            return Err(Error::Argument(format!(
                "dual-set count {dual_count} must exceed k = {k}"
            )));
        }
        Ok(Self {
            k,
            dual_count,
            adaptive_count,
            oversample: 10,
            power_iters: 2,
        })
    }

    pub fn total(&self) -> usize {
        self.dual_count + self.adaptive_count
    }
}

/// Columns picked by [`near_optimal_select`].
#[derive(Debug, Clone)]
pub struct ColumnSelection {
    /// `m x c`, unscaled columns of `A` (dual-set part first).
    pub c: Matrix,
    pub selection: Selection,
    /// How many leading entries of `selection` came from the dual-set phase.
    pub dual_selected: usize,
}

pub fn near_optimal_select<R: Rng + ?Sized>(
    a: &Matrix,
    params: &ColSelectParams,
    rng: &mut R,
) -> Result<ColumnSelection> {
    let (m, n) = a.shape();
    if params.total() >= n {
        return Err(Error::Argument(format!(
            "selecting {} of {n} columns is vacuous",
            params.total()
        )));
    }
    if params.k > m.min(n) {
        return Err(Error::Argument(format!("rank {} exceeds {m}x{n}", params.k)));
    }
    let svd = randomized_svd(a, params.k, params.oversample, params.power_iters, rng)?;
    let residual = a - svd.reconstruct();
    let input = DualSetInput::new(residual, svd.v, params.dual_count)?;
    let weights = dual_set_sparsify(&input)?;
    let dual_idx = weights.support();
    let c1 = matcore::select_columns(a, &dual_idx);
    let dual_selected = dual_idx.len();

    let mut indices = dual_idx;
    if params.adaptive_count > 0 {
        let extra = sampling::adaptive_sample(a, &c1, Axis::Columns, params.adaptive_count, rng)?;
        indices.extend(extra.indices);
    }
    Ok(ColumnSelection {
        c: matcore::select_columns(a, &indices),
        selection: Selection::unscaled(indices),
        dual_selected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;
    use crate::synthetic;
    use approx::assert_relative_eq;

    #[test]
    fn param_splits() {
        let p = ColSelectParams::new(5, 0.5).unwrap();
        assert_eq!(p.adaptive_count, 20);
        assert_eq!(p.dual_count, 6);
        let p = ColSelectParams::new(4, 0.2).unwrap();
        assert_eq!((p.dual_count, p.adaptive_count), (10, 40));
        let p = ColSelectParams::from_total(10, 40).unwrap();
        assert_eq!((p.dual_count, p.adaptive_count), (11, 29));
        let p = ColSelectParams::from_total(10, 100).unwrap();
        assert_eq!((p.dual_count, p.adaptive_count), (20, 80));
        assert!(ColSelectParams::new(1, 0.5).is_err());
        assert!(ColSelectParams::new(3, 0.0).is_err());
        assert!(ColSelectParams::new(3, 1.5).is_err());
        assert!(ColSelectParams::from_total(5, 6).is_err());
    }

    #[test]
    fn randomized_svd_exact_rank() {
        let a = synthetic::low_rank(40, 30, 3, 0.0, 11);
        let svd = randomized_svd(&a, 3, 10, 2, &mut rng_from_seed(1)).unwrap();
        assert!((a - svd.reconstruct()).norm() < 1e-8);
        let gram = svd.v.tr_mul(&svd.v);
        assert!((gram - Matrix::identity(3, 3)).norm() < 1e-8);
    }

    #[test]
    fn randomized_svd_diagonal() {
        let a = Matrix::from_diagonal(&nalgebra::DVector::from_fn(10, |i, _| (10 - i) as f64));
        let svd = randomized_svd(&a, 3, 10, 2, &mut rng_from_seed(2)).unwrap();
        let tail = matcore::tail_frobenius(&a, 3).unwrap();
        assert!((&a - svd.reconstruct()).norm() <= 1.5 * tail);
        assert_relative_eq!(svd.sigma[0], 10.0, epsilon = 1e-10);
    }

    #[test]
    fn randomized_svd_deterministic_and_checked() {
        let a = synthetic::decaying_spectrum(20, 15, 0.8, 3);
        let x = randomized_svd(&a, 4, 5, 1, &mut rng_from_seed(9)).unwrap();
        let y = randomized_svd(&a, 4, 5, 1, &mut rng_from_seed(9)).unwrap();
        assert_eq!(x.u, y.u);
        assert_eq!(x.sigma, y.sigma);
        assert!(randomized_svd(&a, 16, 5, 1, &mut rng_from_seed(9)).is_err());
    }

    #[test]
    fn exact_rank_is_recovered() {
        let a = synthetic::low_rank(30, 60, 3, 0.0, 5);
        let p = ColSelectParams::from_total(3, 12).unwrap();
        let sel = near_optimal_select(&a, &p, &mut rng_from_seed(4)).unwrap();
        let resid = &a - matcore::project_onto_columns(&sel.c, &a).unwrap();
        assert!(resid.norm() < 1e-8);
        assert_eq!(sel.selection.len(), sel.dual_selected + p.adaptive_count);
        assert!(sel.dual_selected <= p.dual_count);
    }

    #[test]
    fn vacuous_selection_rejected() {
        let a = synthetic::decaying_spectrum(20, 15, 0.8, 3);
        let p = ColSelectParams::new(3, 0.5).unwrap();
        assert!(matches!(
            near_optimal_select(&a, &p, &mut rng_from_seed(0)),
            Err(Error::Argument(_))
        ));
    }
}
