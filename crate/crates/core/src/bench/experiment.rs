//! Repeat-and-take-best experiment runner.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ingest::{self, InputFormat};
use super::kernel;
use crate::adversarial::{self, AdversarialSpec, Family};
use crate::cur::{self, AdaptiveCurPlan, ErrorRatio};
use crate::matcore::{Axis, Matrix};
use crate::nystrom::{self, AdaptiveNystromPlan, NystromVariant};
use crate::sampling::{self, Selection};
use crate::{rng_from_seed, synthetic, Error, Result};

/// Where the test matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File { path: PathBuf, format: InputFormat },
    /// RBF kernel over the rows of a CSV file of points.
    KernelFile { points: PathBuf, sigma: f64 },
    /// RBF kernel over `n` standard normal points in `R^dim`, drawn from `seed`.
    KernelRandom { n: usize, dim: usize, sigma: f64, seed: u64 },
    Adversarial(AdversarialSpec),
    /// Geometrically decaying spectrum `rate^i`.
    Synthetic { m: usize, n: usize, rate: f64, seed: u64 },
}

impl Source {
    pub fn load(&self, max_dim: usize) -> Result<Matrix> {
        match self {
            Source::File { path, format } => ingest::ingest(path, *format, max_dim),
            Source::KernelFile { points, sigma } => {
                let p = ingest::ingest(points, InputFormat::DenseCsv, max_dim)?;
                kernel::build_rbf_kernel(&p, *sigma)
            }
            Source::KernelRandom { n, dim, sigma, seed } => {
                check_cap(*n, *n, max_dim)?;
                let p = kernel::gaussian_points(*n, *dim, &mut rng_from_seed(*seed));
                kernel::build_rbf_kernel(&p, *sigma)
            }
            Source::Adversarial(spec) => {
                check_cap(spec.m, spec.m, max_dim)?;
                Ok(spec.build())
            }
            Source::Synthetic { m, n, rate, seed } => {
                check_cap(*m, *n, max_dim)?;
                Ok(synthetic::decaying_spectrum(*m, *n, *rate, *seed))
            }
        }
    }
}

fn check_cap(m: usize, n: usize, max_dim: usize) -> Result<()> {
    if m > max_dim || n > max_dim {
        return Err(Error::InvalidInput(format!("{m}x{n} exceeds the dimension cap of {max_dim}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Cur,
    Nystrom,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Adaptive,
    Subspace,
    Uniform,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Adaptive => "adaptive",
            Method::Subspace => "subspace",
            Method::Uniform => "uniform",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(Method::Adaptive),
            "subspace" => Ok(Method::Subspace),
            "uniform" => Ok(Method::Uniform),
            other => Err(Error::Argument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Standard,
    StandardK,
    Ensemble,
    Modified,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::StandardK => "standard-k",
            Variant::Ensemble => "ensemble",
            Variant::Modified => "modified",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "standard-k" => Ok(Variant::StandardK),
            "ensemble" => Ok(Variant::Ensemble),
            "modified" => Ok(Variant::Modified),
            other => Err(Error::Argument(format!("unknown variant '{other}'"))),
        }
    }
}

/// Sample sizes: `c = a k` (and `r = a c`) per multiplier, or derived from `eps`.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Multipliers(Vec<f64>),
    Epsilon(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: Source,
    pub task: Task,
    pub method: Method,
    pub variant: Variant,
    pub k: usize,
    pub sweep: Sweep,
    pub ensemble_t: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Record wall-clock seconds; disable for byte-identical output.
    pub timing: bool,
    pub max_dim: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Argument("repeats must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Argument("k must be at least 1".into()));
        }
        if self.ensemble_t == 0 {
            return Err(Error::Argument("ensemble size must be at least 1".into()));
        }
        match &self.sweep {
            Sweep::Multipliers(a) if a.is_empty() => {
                return Err(Error::Argument("empty multiplier grid".into()))
            }
            Sweep::Multipliers(a) if a.iter().any(|x| !(*x > 0.0) || !x.is_finite()) => {
                return Err(Error::Argument("multipliers must be positive".into()))
            }
            Sweep::Epsilon(e) if !(*e > 0.0 && *e <= 1.0) => {
                return Err(Error::Argument(format!("epsilon must lie in (0, 1], got {e}")))
            }
            Sweep::Epsilon(_) if self.task == Task::LowerBound => {
                return Err(Error::Argument("the lowerbound task takes a multiplier grid".into()))
            }
            _ => {}
        }
        if self.task == Task::LowerBound && !matches!(self.source, Source::Adversarial(_)) {
            return Err(Error::Argument("the lowerbound task needs an adversarial source".into()));
        }
        Ok(())
    }
}

/// One grid point of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub method: String,
    pub variant: String,
    pub k: usize,
    pub c: usize,
    pub r: usize,
    /// Minimum over repeats; `None` when the point was skipped.
    pub error_ratio: Option<f64>,
    pub per_repeat: Vec<f64>,
    pub seconds: f64,
    pub seed: u64,
    pub a: Option<f64>,
    pub epsilon: Option<f64>,
    /// Closed-form lower bound on the residual Frobenius norm (lowerbound task).
    pub bound: Option<f64>,
    /// Smallest measured residual Frobenius norm (lowerbound task).
    pub measured: Option<f64>,
    pub note: Option<String>,
}

fn skippable(e: &Error) -> bool {
    matches!(e, Error::Argument(_) | Error::RankDeficient { .. })
}

struct Point {
    c: usize,
    r: usize,
    a: Option<f64>,
    epsilon: Option<f64>,
    cur_plan: Option<AdaptiveCurPlan>,
    nys_plan: Option<AdaptiveNystromPlan>,
}

fn points(config: &ExperimentConfig) -> Vec<std::result::Result<Point, (Option<f64>, Error)>> {
    let k = config.k;
    match &config.sweep {
        Sweep::Multipliers(grid) => grid
            .iter()
            .map(|&a| {
                let c = (a * k as f64).round() as usize;
                let r = if config.task == Task::Cur { (a * c as f64).round() as usize } else { 0 };
                let plans = || -> Result<(Option<AdaptiveCurPlan>, Option<AdaptiveNystromPlan>)> {
                    if config.method != Method::Adaptive {
                        return Ok((None, None));
                    }
                    Ok(match config.task {
                        Task::Cur => (Some(AdaptiveCurPlan::from_counts(k, c, r)?), None),
                        Task::Nystrom => (None, Some(AdaptiveNystromPlan::from_total(k, c)?)),
                        Task::LowerBound => (None, None),
                    })
                };
                let (cur_plan, nys_plan) = plans().map_err(|e| (Some(a), e))?;
                Ok(Point { c, r, a: Some(a), epsilon: None, cur_plan, nys_plan })
            })
            .collect(),
        Sweep::Epsilon(eps) => {
            let eps = *eps;
            let built = match config.task {
                Task::Cur => AdaptiveCurPlan::from_epsilon(k, eps).map(|p| Point {
                    c: p.c(),
                    r: p.r(),
                    a: None,
                    epsilon: Some(eps),
                    cur_plan: Some(p),
                    nys_plan: None,
                }),
                _ => AdaptiveNystromPlan::from_epsilon(k, eps).map(|p| Point {
                    c: p.c(),
                    r: 0,
                    a: None,
                    epsilon: Some(eps),
                    cur_plan: None,
                    nys_plan: Some(p),
                }),
            };
            vec![built.map_err(|e| (None, e))]
        }
    }
}

fn timed<T>(timing: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, if timing { start.elapsed().as_secs_f64() } else { 0.0 }))
}

/// Runs every grid point; infeasible points become records with a note.
pub fn run_experiment(config: &ExperimentConfig, a: &Matrix) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let variant_name = match config.task {
        Task::Cur => "cur".to_string(),
        _ => config.variant.name().to_string(),
    };
    let mut records = Vec::new();
    for point in points(config) {
        let base = |c: usize, r: usize, a_mult: Option<f64>, eps: Option<f64>| ResultRecord {
            method: config.method.name().to_string(),
            variant: variant_name.clone(),
            k: config.k,
            c,
            r,
            error_ratio: None,
            per_repeat: Vec::new(),
            seconds: 0.0,
            seed: config.seed,
            a: a_mult,
            epsilon: eps,
            bound: None,
            measured: None,
            note: None,
        };
        let point = match point {
            Ok(p) => p,
            Err((mult, e)) if skippable(&e) => {
                let c = mult.map(|x| (x * config.k as f64).round() as usize).unwrap_or(0);
                let mut rec = base(c, 0, mult, None);
                rec.note = Some(format!("skipped: {e}"));
                records.push(rec);
                continue;
            }
            Err((_, e)) => return Err(e),
        };
        let mut rec = base(point.c, point.r, point.a, point.epsilon);
        let outcome = match config.task {
            Task::Cur => run_cur(config, a, &point),
            Task::Nystrom => run_nystrom(config, a, &point),
            Task::LowerBound => run_lowerbound(config, a, &point),
        };
        match outcome {
            Ok(o) => {
                rec.error_ratio = o.errors.iter().copied().reduce(f64::min);
                rec.per_repeat = o.errors;
                rec.seconds = o.seconds;
                rec.bound = o.bound;
                rec.measured = o.measured;
                rec.note = o.note;
            }
            Err(e) if skippable(&e) => rec.note = Some(format!("skipped: {e}")),
            Err(e) => return Err(e),
        }
        records.push(rec);
    }
    Ok(records)
}

struct Outcome {
    errors: Vec<f64>,
    seconds: f64,
    bound: Option<f64>,
    measured: Option<f64>,
    note: Option<String>,
}

impl Outcome {
    fn plain(errors: Vec<f64>, seconds: f64) -> Self {
        Self { errors, seconds, bound: None, measured: None, note: None }
    }
}

fn repeat(config: &ExperimentConfig, run: impl Fn(u64) -> Result<f64> + Sync) -> Result<Outcome> {
    let results: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        (0..config.repeats as u64)
            .into_par_iter()
            .map(|i| timed(config.timing, || run(config.seed.wrapping_add(i))))
            .collect::<Result<_>>()?
    };
    let seconds = results.iter().map(|(_, s)| s).sum();
    Ok(Outcome::plain(results.into_iter().map(|(e, _)| e).collect(), seconds))
}

fn run_cur(config: &ExperimentConfig, a: &Matrix, p: &Point) -> Result<Outcome> {
    let ratio = ErrorRatio::new(a, config.k)?;
    let (m, n) = a.shape();
    if p.c >= n.min(m) || p.r > m {
        return Err(Error::Argument(format!(
            "c={} and r={} do not fit a {m}x{n} matrix",
            p.c, p.r
        )));
    }
    repeat(config, |seed| {
        let mut rng = rng_from_seed(seed);
        let d = match config.method {
            Method::Adaptive => cur::adaptive_cur(a, p.cur_plan.as_ref().expect("adaptive plan"), &mut rng)?,
            Method::Subspace => cur::subspace_cur(a, config.k, p.c, p.r, &mut rng)?,
            Method::Uniform => cur::uniform_cur(a, p.c, p.r, &mut rng)?,
        };
        ratio.of(a, &d.reconstruct())
    })
}

fn draw<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    a: &Matrix,
    p: &Point,
    rng: &mut R,
) -> Result<Selection> {
    match config.method {
        Method::Adaptive => {
            let plan = p.nys_plan.as_ref().expect("adaptive plan");
            let approx = nystrom::adaptive_modified_nystrom(a, plan, rng)?;
            Ok(Selection::unscaled(approx.col_indices))
        }
        Method::Subspace => {
            let dist = sampling::subspace_distribution(a, config.k, Axis::Columns)?;
            sampling::sample_scaled(&dist, p.c, rng)
        }
        Method::Uniform => nystrom::uniform_selection(a.ncols(), p.c, rng),
    }
}

fn nystrom_variant(config: &ExperimentConfig) -> NystromVariant {
    match config.variant {
        Variant::Standard => NystromVariant::Standard,
        Variant::StandardK => NystromVariant::StandardRankK(config.k),
        Variant::Ensemble => NystromVariant::Ensemble,
        Variant::Modified => NystromVariant::Modified,
    }
}

fn run_nystrom(config: &ExperimentConfig, a: &Matrix, p: &Point) -> Result<Outcome> {
    let a = &nystrom::symmetrized(a)?;
    let ratio = ErrorRatio::new(a, config.k)?;
    let m = a.nrows();
    if p.c >= m {
        return Err(Error::Argument(format!("c={} does not fit a {m}x{m} matrix", p.c)));
    }
    let variant = nystrom_variant(config);
    repeat(config, |seed| {
        let mut rng = rng_from_seed(seed);
        let approx = if variant == NystromVariant::Ensemble {
            let t = config.ensemble_t;
            let samples = if config.method == Method::Uniform && t * p.c <= m {
                nystrom::disjoint_uniform_samples(m, p.c, t, &mut rng)?
            } else {
                (0..t).map(|_| draw(config, a, p, &mut rng)).collect::<Result<Vec<_>>>()?
            };
            let size = samples.iter().map(Selection::len).min().unwrap_or(0);
            let samples: Vec<Selection> = samples
                .into_iter()
                .map(|mut s| {
                    s.indices.truncate(size);
                    if let Some(d) = s.scaling.as_mut() {
                        d.truncate(size);
                    }
                    s
                })
                .collect();
            nystrom::ensemble_nystrom(a, &samples, None)?
        } else {
            let sel = draw(config, a, p, &mut rng)?;
            nystrom::from_selection(a, &sel, variant)?
        };
        ratio.of(a, &approx.reconstruct())
    })
}

fn run_lowerbound(config: &ExperimentConfig, a: &Matrix, p: &Point) -> Result<Outcome> {
    let Source::Adversarial(spec) = config.source else {
        return Err(Error::Argument("the lowerbound task needs an adversarial source".into()));
    };
    let tail_k = match spec.family {
        Family::Single => config.k,
        Family::BlockDiag { blocks } => blocks,
    };
    let ratio = ErrorRatio::new(a, tail_k)?;
    let m = spec.m;
    let t = config.ensemble_t;
    let bound = match config.variant {
        Variant::Standard => Some(adversarial::standard_lower_bounds(&spec, p.c)?.frobenius),
        Variant::Ensemble => Some(adversarial::ensemble_lower_bounds(&spec, p.c, t)?.frobenius),
        Variant::StandardK | Variant::Modified => None,
    };
    let variant = nystrom_variant(config);
    let measured: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        (0..config.repeats as u64)
            .into_par_iter()
            .map(|i| {
                timed(config.timing, || {
                    let mut rng = rng_from_seed(config.seed.wrapping_add(i));
                    let approx = if variant == NystromVariant::Ensemble {
                        let samples = nystrom::disjoint_uniform_samples(m, p.c, t, &mut rng)?;
                        nystrom::ensemble_nystrom(a, &samples, None)?
                    } else {
                        let sel = nystrom::uniform_selection(m, p.c, &mut rng)?;
                        nystrom::from_selection(a, &sel, variant)?
                    };
                    Ok(approx.residual_frobenius(a))
                })
            })
            .collect::<Result<_>>()?
    };
    let seconds = measured.iter().map(|(_, s)| s).sum();
    let residuals: Vec<f64> = measured.iter().map(|(r, _)| *r).collect();
    let min_residual = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let note = match bound {
        Some(b) if min_residual < b - 1e-8 => Some(format!("measured {min_residual:.6e} below bound {b:.6e}")),
        Some(_) => Some("measured >= bound".to_string()),
        None => Some("no closed-form bound for this variant".to_string()),
    };
    Ok(Outcome {
        errors: residuals.iter().map(|r| r / ratio.tail()).collect(),
        seconds,
        bound,
        measured: Some(min_residual),
        note,
    })
}
