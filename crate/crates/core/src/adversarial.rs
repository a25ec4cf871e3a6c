//! Matrices on which the standard and ensemble Nyström methods do badly, with
//! closed forms for their norms and for the Nyström residual norms.
//!
//! `B = (1 - alpha) I_m + alpha 1 1^T` has unit diagonal and constant off-diagonal
//! `alpha`; the block-diagonal family stacks `k` copies of the `p x p` version, `p = m/k`.
//!
//! Formulas are written with `alpha` multiplied through so that `alpha = 0` is covered.

use crate::matcore::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Single,
    BlockDiag { blocks: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversarialSpec {
    pub m: usize,
    pub alpha: f64,
    pub family: Family,
}

impl AdversarialSpec {
    pub fn single(m: usize, alpha: f64) -> Result<Self> {
        Self::validated(m, alpha, Family::Single)
    }

    pub fn block_diagonal(m: usize, blocks: usize, alpha: f64) -> Result<Self> {
        Self::validated(m, alpha, Family::BlockDiag { blocks })
    }

    fn validated(m: usize, alpha: f64, family: Family) -> Result<Self> {
        if m == 0 {
            return Err(Error::Argument("matrix size must be positive".into()));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Argument(format!("alpha must lie in [0, 1), got {alpha}")));
        }
        if let Family::BlockDiag { blocks } = family {
            if blocks == 0 || !m.is_multiple_of(blocks) {
                return Err(Error::Argument(format!("{blocks} blocks do not divide m = {m}")));
            }
        }
        Ok(Self { m, alpha, family })
    }

    pub fn blocks(&self) -> usize {
        match self.family {
            Family::Single => 1,
            Family::BlockDiag { blocks } => blocks,
        }
    }

    pub fn block_size(&self) -> usize {
        self.m / self.blocks()
    }

    pub fn build(&self) -> Matrix {
        let p = self.block_size();
        let alpha = self.alpha;
        Matrix::from_fn(self.m, self.m, |i, j| {
            if i == j {
                1.0
            } else if i / p == j / p {
                alpha
            } else {
                0.0
            }
        })
    }
}

/// `eta = c alpha^2 / (1 - alpha + c alpha)`, the constant value of `B21 W^† B21^T`.
pub fn eta(c: usize, alpha: f64) -> f64 {
    let c = c as f64;
    c * alpha * alpha / (1.0 - alpha + c * alpha)
}

/// Norms of the matrix and of its best rank-`k` residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRecord {
    pub frobenius: f64,
    pub spectral: f64,
    pub nuclear: f64,
    pub tail_frobenius: f64,
    pub tail_spectral: f64,
    pub tail_nuclear: f64,
}

/// Closed-form norms. The block-diagonal family requires `k` to equal the block count.
pub fn closed_form_norms(spec: &AdversarialSpec, k: usize) -> Result<NormRecord> {
    let m = spec.m;
    if k == 0 || k >= m {
        return Err(Error::Argument(format!("need 0 < k < m, got k={k}, m={m}")));
    }
    let a = spec.alpha;
    let mf = m as f64;
    let rest = (m - k) as f64;
    match spec.family {
        Family::Single => Ok(NormRecord {
            frobenius: (mf * mf * a * a + mf * (1.0 - a * a)).sqrt(),
            spectral: 1.0 + mf * a - a,
            nuclear: mf,
            tail_frobenius: rest.sqrt() * (1.0 - a),
            tail_spectral: 1.0 - a,
            tail_nuclear: rest * (1.0 - a),
        }),
        Family::BlockDiag { blocks } => {
            if k != blocks {
                return Err(Error::Argument(format!(
                    "block-diagonal norms are tabulated for k = {blocks} blocks, got k={k}"
                )));
            }
            let p = spec.block_size() as f64;
            let block_f2 = p * p * a * a + p * (1.0 - a * a);
            Ok(NormRecord {
                frobenius: (blocks as f64 * block_f2).sqrt(),
                spectral: 1.0 + p * a - a,
                nuclear: mf,
                tail_frobenius: (1.0 - a) * rest.sqrt(),
                tail_spectral: 1.0 - a,
                tail_nuclear: (1.0 - a) * rest,
            })
        }
    }
}

/// Lower bounds (or exact values) for residual norms; `None` where no formula exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBounds {
    pub frobenius: f64,
    pub spectral: Option<f64>,
    pub nuclear: f64,
}

fn check_c(c: usize, m: usize) -> Result<()> {
    if c == 0 || c >= m {
        return Err(Error::Argument(format!("need 0 < c < m, got c={c}, m={m}")));
    }
    Ok(())
}

/// Standard Nyström residual of `B` from any `c` columns; these are equalities.
fn single_standard(m: f64, a: f64, c: f64) -> LowerBounds {
    let d = c * a + 1.0 - a;
    let f2 = (1.0 - a).powi(2) * (m - c) * (1.0 + a * (m * a + c * a + 2.0 - 2.0 * a) / (d * d));
    LowerBounds {
        frobenius: f2.sqrt(),
        spectral: Some((1.0 - a) * (m * a + 1.0 - a) / d),
        nuclear: (m - c) * (1.0 - a) * (1.0 + c * a) / d,
    }
}

/// Standard Nyström residual lower bounds from `c` columns.
///
/// Single family: exact for every selection. Block-diagonal family: equal for balanced
/// selections (`c/k` columns per block), a lower bound otherwise; no spectral form.
pub fn standard_lower_bounds(spec: &AdversarialSpec, c: usize) -> Result<LowerBounds> {
    check_c(c, spec.m)?;
    let (m, a, cf) = (spec.m as f64, spec.alpha, c as f64);
    match spec.family {
        Family::Single => Ok(single_standard(m, a, cf)),
        Family::BlockDiag { blocks } => {
            let k = blocks as f64;
            let d = cf * a + (1.0 - a) * k;
            let ratio = (m * a + (1.0 - a) * k) / d;
            Ok(LowerBounds {
                frobenius: (1.0 - a) * (m - cf - k + k * ratio * ratio).sqrt(),
                spectral: None,
                nuclear: (1.0 - a) * (m - cf) * (1.0 + k * a / d),
            })
        }
    }
}

/// Exact Frobenius and nuclear residual norms of the standard Nyström method on the
/// block-diagonal matrix when block `i` contributes `counts[i]` columns.
pub fn block_residual_exact(spec: &AdversarialSpec, counts: &[usize]) -> Result<(f64, f64)> {
    if counts.len() != spec.blocks() {
        return Err(Error::Argument(format!(
            "{} block counts for {} blocks",
            counts.len(),
            spec.blocks()
        )));
    }
    let p = spec.block_size();
    let mut f2 = 0.0;
    let mut nuclear = 0.0;
    for &ci in counts {
        if ci > p {
            return Err(Error::Argument(format!("{ci} columns from a block of size {p}")));
        }
        if ci == p {
            continue;
        }
        let part = single_standard(p as f64, spec.alpha, ci as f64);
        f2 += part.frobenius * part.frobenius;
        nuclear += part.nuclear;
    }
    Ok((f2.sqrt(), nuclear))
}

/// Ratios `||A - C W^† C^T|| / ||A - A_k||` reached as `alpha -> 1`.
pub fn standard_ratio_bounds(m: usize, c: usize, k: usize) -> Result<LowerBounds> {
    check_c(c, m)?;
    if k == 0 || k >= m {
        return Err(Error::Argument(format!("need 0 < k < m, got k={k}, m={m}")));
    }
    let (m, c, k) = (m as f64, c as f64, k as f64);
    Ok(LowerBounds {
        frobenius: (1.0 + (m * m * k - c * c * c) / (c * c * (m - k))).sqrt(),
        spectral: Some(m / c),
        nuclear: (m - c) / (m - k) * (1.0 + k / c),
    })
}

fn check_ensemble(m: usize, c: usize, t: usize) -> Result<()> {
    if t == 0 || c == 0 {
        return Err(Error::Argument("need t >= 1 and c >= 1".into()));
    }
    if t * c > m {
        return Err(Error::Argument(format!(
            "{t} non-overlapping samples of {c} columns exceed m = {m}"
        )));
    }
    Ok(())
}

/// Ensemble Nyström (uniform weights, `t` non-overlapping samples of `c` columns) lower
/// bounds. No spectral form is known.
pub fn ensemble_lower_bounds(spec: &AdversarialSpec, c: usize, t: usize) -> Result<LowerBounds> {
    check_ensemble(spec.m, c, t)?;
    let (m, a, cf, tf) = (spec.m as f64, spec.alpha, c as f64, t as f64);
    match spec.family {
        Family::Single => {
            let d = cf * a + 1.0 - a;
            let x = m - 2.0 * cf + cf / tf;
            let f2 = (1.0 - a).powi(2) * x * (1.0 + a * (m * a + cf / tf * a + 2.0 - 2.0 * a) / (d * d));
            Ok(LowerBounds {
                frobenius: f2.sqrt(),
                spectral: None,
                nuclear: (1.0 - a) * (m - cf) * (cf * a + 1.0) / d,
            })
        }
        Family::BlockDiag { blocks } => {
            let k = blocks as f64;
            let d = cf * a + k * (1.0 - a);
            let ratio = ((m - cf + cf / tf) * a + k * (1.0 - a)) / d;
            let x = m - 2.0 * cf + cf / tf - k;
            Ok(LowerBounds {
                frobenius: (1.0 - a) * (x + k * ratio * ratio).sqrt(),
                spectral: None,
                nuclear: (1.0 - a) * (m - cf) * (cf * a + k) / d,
            })
        }
    }
}

/// Exact ensemble residual Frobenius norm on the single matrix `B` with `t`
/// non-overlapping samples of `c` columns and uniform weights.
pub fn ensemble_frobenius_exact(m: usize, alpha: f64, c: usize, t: usize) -> Result<f64> {
    check_ensemble(m, c, t)?;
    let (m, a, c, t) = (m as f64, alpha, c as f64, t as f64);
    let x = m - 2.0 * c + c / t;
    let d = c * a + 1.0 - a;
    let f2 = (1.0 - a).powi(2) * x
        + (1.0 - a).powi(2) / (d * d) * (x * a * (2.0 - 2.0 * a + m * a) + a * a * c * (m - c) / t);
    Ok(f2.sqrt())
}

/// Ensemble ratios `||A - A_ens|| / ||A - A_k||` from the `alpha -> 1` argument.
pub fn ensemble_ratio_bounds(m: usize, c: usize, k: usize, t: usize) -> Result<LowerBounds> {
    check_ensemble(m, c, t)?;
    if k == 0 || k >= m {
        return Err(Error::Argument(format!("need 0 < k < m, got k={k}, m={m}")));
    }
    let (m, c, k, t) = (m as f64, c as f64, k as f64, t as f64);
    let x = m - 2.0 * c + c / t;
    Ok(LowerBounds {
        frobenius: ((x - k) / (m - k) * (1.0 + k * x / (c * c))).sqrt(),
        spectral: None,
        nuclear: (m - c) / (m - k) * (1.0 + k / c),
    })
}
