//! Randomized SVD and near-optimal column selection compared to the best rank-k error.

use curnys::colselect::{self, ColSelectParams};
use curnys::{matcore, rng_from_seed, synthetic};

fn main() -> curnys::Result<()> {
    let a = synthetic::power_law_spectrum(100, 80, 0.6, 2);
    let k = 5;
    let tail = matcore::tail_frobenius(&a, k)?;

    let approx = colselect::randomized_svd(&a, k, 10, 2, &mut rng_from_seed(0))?;
    println!("randomized rank-{k} SVD error ratio: {:.4}", (&a - approx.reconstruct()).norm() / tail);

    for eps in [1.0, 0.5, 0.25] {
        let params = ColSelectParams::new(k, eps)?;
        let ratios: Vec<f64> = (0..10)
            .map(|seed| {
                let sel = colselect::near_optimal_select(&a, &params, &mut rng_from_seed(seed))?;
                let proj = matcore::project_onto_columns(&sel.c, &a)?;
                Ok((&a - proj).norm_squared() / (tail * tail))
            })
            .collect::<curnys::Result<_>>()?;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        println!(
            "eps = {eps:<4}  columns {:3} (dual {}, adaptive {})  mean squared ratio {mean:.4}  target {:.2}",
            params.total(),
            params.dual_count,
            params.adaptive_count,
            1.0 + eps
        );
    }
    Ok(())
}
