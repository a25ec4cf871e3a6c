//! Closed-form norms and Nyström lower bounds on the all-equal-off-diagonal matrices.

use curnys::adversarial::{self, AdversarialSpec};
use curnys::nystrom;
use curnys::{matcore, rng_from_seed};

fn main() -> curnys::Result<()> {
    let spec = AdversarialSpec::single(100, 0.8)?;
    let b = spec.build();
    let cf = adversarial::closed_form_norms(&spec, 1)?;
    let svd = matcore::norms(&b)?;
    println!("closed form F {:.6}  SVD F {:.6}", cf.frobenius, svd.frobenius);

    println!("  c   bound F    measured F (best of 20 uniform)");
    for c in [1, 5, 10, 20, 40] {
        let lb = adversarial::standard_lower_bounds(&spec, c)?;
        let best = (0..20)
            .map(|s| {
                let sel = nystrom::uniform_selection(100, c, &mut rng_from_seed(s))?;
                Ok(nystrom::standard_nystrom(&b, &sel, None)?.residual_frobenius(&b))
            })
            .collect::<curnys::Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        println!("{c:3}   {:.6}   {best:.6}", lb.frobenius);
    }

    let blocks = AdversarialSpec::block_diagonal(100, 10, 0.8)?;
    let lb = adversarial::standard_lower_bounds(&blocks, 20)?;
    let exact = adversarial::block_residual_exact(&blocks, &[2; 10])?;
    println!("block diagonal, 2 per block: bound {:.6}  exact {:.6}", lb.frobenius, exact.0);

    let ens = adversarial::ensemble_lower_bounds(&spec, 20, 3)?;
    println!("ensemble t = 3: F bound {:.6}  nuclear bound {:.6}", ens.frobenius, ens.nuclear);

    let r = adversarial::standard_ratio_bounds(100, 20, 10)?;
    println!(
        "ratio limits as alpha -> 1: F {:.4}  spectral {:.4}  nuclear {:.4}",
        r.frobenius,
        r.spectral.unwrap_or(f64::NAN),
        r.nuclear
    );
    Ok(())
}
