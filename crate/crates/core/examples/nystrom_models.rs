//! Standard, rank-restricted, ensemble and modified Nyström on the same columns.

use curnys::nystrom::{self, NystromVariant};
use curnys::sampling::Selection;
use curnys::{bench::kernel, rng_from_seed};

fn main() -> curnys::Result<()> {
    let points = kernel::gaussian_points(120, 3, &mut rng_from_seed(0));
    let a = kernel::build_rbf_kernel(&points, 1.5)?;
    let sel = nystrom::uniform_selection(a.nrows(), 20, &mut rng_from_seed(1))?;

    let report = |name: &str, approx: &nystrom::NystromApproximation| {
        println!("{name:<12} residual {:.4e}", approx.residual_frobenius(&a));
    };
    report("standard", &nystrom::standard_nystrom(&a, &sel, None)?);
    report("standard-k", &nystrom::standard_nystrom(&a, &sel, Some(5))?);
    report("modified", &nystrom::modified_nystrom(&a, &sel)?);

    let samples = nystrom::disjoint_uniform_samples(a.nrows(), 20, 3, &mut rng_from_seed(2))?;
    report("ensemble", &nystrom::ensemble_nystrom(&a, &samples, None)?);
    let weighted = nystrom::ensemble_nystrom(&a, &samples, Some(&[0.5, 0.3, 0.2]))?;
    report("weighted", &weighted);

    // adding columns never hurts the modified model
    let more = sel.clone().concat(Selection::unscaled(vec![100, 101, 102, 103]));
    report("modified+4", &nystrom::from_selection(&a, &more, NystromVariant::Modified)?);
    Ok(())
}
