//! Adaptive CUR against subspace-sampling and uniform CUR with paired seeds.

use curnys::cur::{self, AdaptiveCurPlan, ErrorRatio};
use curnys::{rng_from_seed, synthetic};

fn main() -> curnys::Result<()> {
    let a = synthetic::power_law_spectrum(200, 150, 0.5, 1);
    let k = 5;
    let er = ErrorRatio::new(&a, k)?;
    let plan = AdaptiveCurPlan::from_epsilon(k, 0.5)?;
    let (c, r) = (plan.c(), plan.r());

    println!("seed  adaptive  subspace  uniform");
    for seed in 0..8 {
        let ad = cur::adaptive_cur(&a, &plan, &mut rng_from_seed(seed))?;
        let sub = cur::subspace_cur(&a, k, c, r, &mut rng_from_seed(seed))?;
        let uni = cur::uniform_cur(&a, c, r, &mut rng_from_seed(seed))?;
        println!(
            "{seed:4}  {:8.4}  {:8.4}  {:7.4}",
            er.of(&a, &ad.reconstruct())?,
            er.of(&a, &sub.reconstruct())?,
            er.of(&a, &uni.reconstruct())?
        );
    }
    Ok(())
}
