//! Adaptive CUR from an accuracy target or explicit sample sizes.

use curnys::cur::{self, AdaptiveCurPlan, ErrorRatio};
use curnys::{rng_from_seed, synthetic};

fn main() -> curnys::Result<()> {
    let a = synthetic::power_law_spectrum(200, 150, 0.5, 1);
    let k = 5;
    let er = ErrorRatio::new(&a, k)?;

    let plan = AdaptiveCurPlan::from_epsilon(k, 0.5)?;
    println!("eps = 0.5 plan: c = {}, r = {}", plan.c(), plan.r());
    let d = cur::adaptive_cur(&a, &plan, &mut rng_from_seed(0))?;
    println!("C {:?}  U {:?}  R {:?}", d.c.shape(), d.u.shape(), d.r.shape());
    println!("columns: {:?}", d.col_indices);
    println!("error ratio: {:.4}", er.of(&a, &d.reconstruct())?);

    // the one-call form seeds its own generator
    let d = cur::adaptive_cur_eps(&a, k, 0.5, 0)?;
    println!("adaptive_cur_eps ratio: {:.4}", er.of(&a, &d.reconstruct())?);

    for (c, r) in [(10, 20), (20, 60), (40, 120)] {
        let plan = AdaptiveCurPlan::from_counts(k, c, r)?;
        let d = cur::adaptive_cur(&a, &plan, &mut rng_from_seed(1))?;
        println!("c = {c:3}, r = {r:3}: ratio {:.4}", er.of(&a, &d.reconstruct())?);
    }
    Ok(())
}
