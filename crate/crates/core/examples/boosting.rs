//! Repeat-and-take-best boosting and its failure bound.

use curnys::cur::{self, AdaptiveCurPlan, ErrorRatio};
use curnys::nystrom;
use curnys::{rng_from_seed, synthetic};

fn main() -> curnys::Result<()> {
    let a = synthetic::power_law_spectrum(200, 150, 0.5, 1);
    let eps = 0.5;
    let er = ErrorRatio::new(&a, 5)?;
    let plan = AdaptiveCurPlan::from_epsilon(5, eps)?;

    for t in [1, 3, 9] {
        let boosted = nystrom::boosted_run(t, 100, |seed| {
            let d = cur::adaptive_cur(&a, &plan, &mut rng_from_seed(seed))?;
            let ratio = er.of(&a, &d.reconstruct())?;
            Ok((d, ratio))
        })?;
        println!(
            "t = {t}: best ratio {:.4} from seed {}  (all: {:.4?})  P[fail] <= {:.4}",
            boosted.best_error(),
            boosted.best_seed,
            boosted.errors,
            nystrom::boosting_failure_bound(eps, 2.0, t as u32)
        );
    }
    Ok(())
}
