//! Adaptive modified Nyström on RBF kernels of varying width.

use curnys::bench::kernel;
use curnys::cur::ErrorRatio;
use curnys::nystrom::{self, AdaptiveNystromPlan, NystromVariant};
use curnys::rng_from_seed;

fn main() -> curnys::Result<()> {
    let points = kernel::gaussian_points(150, 2, &mut rng_from_seed(0));
    let k = 10;
    println!("sigma  c    adaptive  subspace  uniform");
    for sigma in [0.2, 0.5, 1.0, 2.0] {
        let a = kernel::build_rbf_kernel(&points, sigma)?;
        let er = ErrorRatio::new(&a, k)?;
        let plan = AdaptiveNystromPlan::from_epsilon(k, 0.7)?;
        let c = plan.c();
        let ad = nystrom::adaptive_modified_nystrom(&a, &plan, &mut rng_from_seed(1))?;
        let sub = nystrom::subspace_nystrom(&a, k, c, &mut rng_from_seed(1))?;
        let uni = nystrom::uniform_nystrom(&a, c, NystromVariant::Standard, &mut rng_from_seed(1))?;
        println!(
            "{sigma:<5}  {c:3}  {:8.4}  {:8.4}  {:7.4}",
            er.of(&a, &ad.reconstruct())?,
            er.of(&a, &sub.reconstruct())?,
            er.of(&a, &uni.reconstruct())?
        );
    }
    Ok(())
}
