//! Residual, leverage and uniform sampling distributions and the seeded samplers.

use curnys::sampling::{self, SamplingDistribution};
use curnys::{matcore, rng_from_seed, synthetic, Axis};

fn main() -> curnys::Result<()> {
    let a = synthetic::decaying_spectrum(20, 10, 0.7, 1);
    let mut rng = rng_from_seed(42);

    let lev = sampling::subspace_distribution(&a, 3, Axis::Columns)?;
    println!("leverage probabilities: {:.3?}", lev.probs());

    // columns already chosen; the residual distribution favours what they miss
    let chosen = matcore::select_columns(&a, &[0, 1]);
    let res = sampling::residual_distribution(&a, &chosen, Axis::Columns)?;
    println!("residual probabilities: {:.3?}", res.probs());
    println!("  zero mass on chosen columns: {}", res.probs()[0] < 1e-12 && res.probs()[1] < 1e-12);

    let iid = sampling::sample_iid(&res, 8, &mut rng)?;
    println!("iid draws:               {:?}", iid.indices);
    let distinct = sampling::sample_without_replacement(&res, 5, &mut rng)?;
    println!("without replacement:     {:?}", distinct.indices);
    let scaled = sampling::sample_scaled(&lev, 4, &mut rng)?;
    println!("scaled draws:            {:?} scaling {:.3?}", scaled.indices, scaled.scaling.unwrap());

    let uniform = SamplingDistribution::uniform(10);
    let rows = sampling::adaptive_sample(&a, &matcore::select_rows(&a, &[0, 1, 2]), Axis::Rows, 4, &mut rng)?;
    println!("uniform support {}  adaptive rows {:?}", uniform.support_size(), rows.indices);
    Ok(())
}
