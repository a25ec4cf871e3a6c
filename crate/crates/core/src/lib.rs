//! Adaptive-sampling CUR decomposition and Nyström approximation.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: SVD, pseudoinverse, projections, norms and leverage scores.
//! - [`sampling`]: residual, leverage and uniform distributions and seeded samplers.
//! - [`dualset`]: deterministic dual-set spectral-Frobenius sparsification.
//! - [`colselect`]: randomized SVD and near-optimal column selection.
//! - [`cur`]: adaptive CUR, the subspace-sampling baseline and the error ratio.
//! - [`nystrom`]: standard, rank-restricted, ensemble and modified Nyström models,
//!   the adaptive modified Nyström algorithm and repeat-and-take-best boosting.
//! - [`adversarial`]: the all-equal-off-diagonal matrices and their closed-form
//!   norms and lower bounds, used as exact oracles.
//! - [`bench`]: matrix ingestion, RBF kernels, experiment execution and result emission.
//! - [`synthetic`]: seeded test-instance generators.
//!
//! Every randomized routine takes an explicit seed or RNG; there is no global state.
//! See the `examples/` directory for one runnable program per capability.

pub mod adversarial;
pub mod bench;
pub mod colselect;
pub mod cur;
pub mod dualset;
mod error;
pub mod matcore;
pub mod nystrom;
pub mod sampling;
pub mod synthetic;

pub use error::{Error, Result};
pub use matcore::{Axis, Matrix};

/// Deterministic generator used throughout the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
