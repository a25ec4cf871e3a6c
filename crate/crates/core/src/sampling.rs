//! Sampling distributions over row/column indices and the samplers that draw from them.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::matcore::{self, Axis, Matrix};
use crate::{Error, Result};

/// Probabilities below this are treated as exactly zero.
const PROB_FLOOR: f64 = 1e-300;

/// Where a distribution's probabilities came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Residual,
    Leverage,
    Uniform,
}

/// A probability vector over indices `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingDistribution {
    probs: Vec<f64>,
    provenance: Provenance,
}

impl SamplingDistribution {
    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(weights: &[f64], provenance: Provenance) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Argument(format!("invalid sampling weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Argument("sampling weights sum to zero".into()));
        }
        let mut probs: Vec<f64> = weights
            .iter()
            .map(|w| if w / total < PROB_FLOOR { 0.0 } else { w / total })
            .collect();
        let renorm: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= renorm);
        Ok(Self { probs, provenance })
    }

    pub fn uniform(n: usize) -> Self {
        Self::uniform_with(n, Provenance::Uniform)
    }

    fn uniform_with(n: usize, provenance: Provenance) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
            provenance,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Number of indices with nonzero probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|p| **p > 0.0).count()
    }
}

/// Selected indices, optionally with per-index scaling factors `d_jj`.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub scaling: Option<Vec<f64>>,
}

impl Selection {
    pub fn unscaled(indices: Vec<usize>) -> Self {
        Self {
            indices,
            scaling: None,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Checks every index is below `bound` and every scale factor is positive.
    pub fn validate(&self, bound: usize) -> Result<()> {
        if let Some(i) = self.indices.iter().find(|&&i| i >= bound) {
            return Err(Error::Argument(format!("index {i} out of range 0..{bound}")));
        }
        if let Some(s) = &self.scaling {
            if s.len() != self.indices.len() {
                return Err(Error::Argument("scaling length differs from index count".into()));
            }
            if s.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
                return Err(Error::Argument("scaling factors must be positive".into()));
            }
        }
        Ok(())
    }

    /// `A S D`: the selected columns, scaled when scaling is present.
    pub fn columns_of(&self, a: &Matrix) -> Matrix {
        let mut c = matcore::select_columns(a, &self.indices);
        if let Some(s) = &self.scaling {
            for (j, d) in s.iter().enumerate() {
                c.column_mut(j).scale_mut(*d);
            }
        }
        c
    }

    /// `D S^T A`: the selected rows, scaled when scaling is present.
    pub fn rows_of(&self, a: &Matrix) -> Matrix {
        let mut r = matcore::select_rows(a, &self.indices);
        if let Some(s) = &self.scaling {
            for (i, d) in s.iter().enumerate() {
                r.row_mut(i).scale_mut(*d);
            }
        }
        r
    }

    /// Concatenates two selections; scaling is kept only if both carry it.
    pub fn concat(mut self, other: Selection) -> Selection {
        self.scaling = match (self.scaling.take(), other.scaling) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            _ => None,
        };
        self.indices.extend(other.indices);
        self
    }
}

/// Residual `B = A - C C^† A` (columns) or `B = A - A R^† R` (rows).
pub fn residual(a: &Matrix, basis: &Matrix, axis: Axis) -> Result<Matrix> {
    Ok(match axis {
        Axis::Columns => a - matcore::project_onto_columns(basis, a)?,
        Axis::Rows => a - matcore::project_onto_rows(a, basis)?,
    })
}

/// `p_i = ||b_i||^2 / ||B||_F^2` over the columns (or rows) of the residual.
///
/// A residual that vanishes (relative to `||A||_F`) yields the uniform distribution
/// with residual provenance.
pub fn residual_distribution(a: &Matrix, basis: &Matrix, axis: Axis) -> Result<SamplingDistribution> {
    let b = residual(a, basis, axis)?;
    let weights: Vec<f64> = match axis {
        Axis::Columns => b.column_iter().map(|c| c.norm_squared()).collect(),
        Axis::Rows => b.row_iter().map(|r| r.norm_squared()).collect(),
    };
    if b.norm() <= 1e-12 * a.norm() {
        return Ok(SamplingDistribution::uniform_with(weights.len(), Provenance::Residual));
    }
    SamplingDistribution::from_weights(&weights, Provenance::Residual)
}

/// Leverage-score distribution `p_j = l_j / k`.
pub fn subspace_distribution(a: &Matrix, k: usize, axis: Axis) -> Result<SamplingDistribution> {
    let lev = matcore::leverage_scores(a, k, axis)?;
    SamplingDistribution::from_weights(&lev.scores, Provenance::Leverage)
}

/// Draws `count` indices independently from `dist`.
pub fn sample_iid<R: Rng + ?Sized>(
    dist: &SamplingDistribution,
    count: usize,
    rng: &mut R,
) -> Result<Selection> {
    if count == 0 {
        return Err(Error::Argument("sample count must be at least 1".into()));
    }
    let index = WeightedIndex::new(dist.probs()).map_err(|e| Error::Argument(e.to_string()))?;
    Ok(Selection::unscaled((0..count).map(|_| index.sample(rng)).collect()))
}

/// Draws `count` distinct indices, renormalizing over the remaining mass after each draw.
pub fn sample_without_replacement<R: Rng + ?Sized>(
    dist: &SamplingDistribution,
    count: usize,
    rng: &mut R,
) -> Result<Selection> {
    let support = dist.support_size();
    if count > support {
        return Err(Error::Argument(format!(
            "cannot draw {count} distinct indices from a support of {support}"
        )));
    }
    let mut weights = dist.probs().to_vec();
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = weights.iter().sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut choice = None;
        for (i, w) in weights.iter().enumerate() {
            if *w <= 0.0 {
                continue;
            }
            acc += w;
            choice = Some(i);
            if target < acc {
                break;
            }
        }
        // roundoff can leave `target` past the last cumulative sum; the last positive index wins
        let i = choice.expect("positive mass remains while count <= support");
        picked.push(i);
        weights[i] = 0.0;
    }
    Ok(Selection::unscaled(picked))
}

/// Draws with replacement and attaches `d_jj = 1 / sqrt(count * p_i)`.
pub fn sample_scaled<R: Rng + ?Sized>(
    dist: &SamplingDistribution,
    count: usize,
    rng: &mut R,
) -> Result<Selection> {
    let mut sel = sample_iid(dist, count, rng)?;
    let scaling = sel
        .indices
        .iter()
        .map(|&i| 1.0 / (count as f64 * dist.probs()[i]).sqrt())
        .collect();
    sel.scaling = Some(scaling);
    Ok(sel)
}

/// `C = A S D` and `W = (S D)^T A (S D)` for a sampled, scaled column set.
#[derive(Debug, Clone)]
pub struct ScaledSample {
    pub c: Matrix,
    pub w: Matrix,
    pub selection: Selection,
}

pub fn build_scaled_selection<R: Rng + ?Sized>(
    a: &Matrix,
    dist: &SamplingDistribution,
    count: usize,
    rng: &mut R,
) -> Result<ScaledSample> {
    if !a.is_square() {
        return Err(Error::InvalidInput(format!(
            "scaled selection needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if dist.len() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "distribution over {} indices for a {}-column matrix",
            dist.len(),
            a.ncols()
        )));
    }
    let selection = sample_scaled(dist, count, rng)?;
    let c = selection.columns_of(a);
    let w = selection.rows_of(&c);
    Ok(ScaledSample { c, w, selection })
}

/// Residual-based adaptive sampling: `count` i.i.d. draws from [`residual_distribution`].
pub fn adaptive_sample<R: Rng + ?Sized>(
    a: &Matrix,
    basis: &Matrix,
    axis: Axis,
    count: usize,
    rng: &mut R,
) -> Result<Selection> {
    let dist = residual_distribution(a, basis, axis)?;
    sample_iid(&dist, count, rng)
}
