//! Deterministic dual-set sparsification and its spectral/Frobenius certificate.

use curnys::dualset::{self, DualSetInput};
use curnys::{matcore, synthetic};

fn main() -> curnys::Result<()> {
    let (n, k) = (40, 4);
    // V: n x k with orthonormal columns, X: l x n arbitrary
    let v = synthetic::orthonormal(n, k, 3);
    let x = synthetic::gaussian(6, n, 4);

    for r in [k + 1, 2 * k, 4 * k, n - 1] {
        let input = DualSetInput::new(x.clone(), v.clone(), r)?;
        let w = dualset::dual_set_sparsify(&input)?;
        let cert = dualset::certify(&input, &w);
        println!(
            "r = {r:2}: nonzeros {:2}  lambda_min {:.4} >= {:.4}  trace {:.3} <= {:.3}  holds {}",
            w.nonzero_count(),
            cert.lambda_min,
            cert.spectral_bound,
            cert.trace,
            cert.frobenius_bound,
            cert.holds(1e-9)
        );
    }

    let input = DualSetInput::new(x, v, 2 * k)?;
    let w = dualset::dual_set_sparsify(&input)?;
    println!("support: {:?}", w.support());
    println!("||X||_F^2 = {:.3}", matcore::norms(input.x())?.frobenius.powi(2));
    Ok(())
}
