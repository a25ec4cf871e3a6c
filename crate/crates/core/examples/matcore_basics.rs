//! SVD, pseudoinverse, projections and leverage scores on a small matrix.

use curnys::{matcore, synthetic, Axis};

fn main() -> curnys::Result<()> {
    let a = synthetic::low_rank(12, 8, 3, 1e-3, 7);

    let s = matcore::singular_values(&a)?;
    println!("singular values: {:.4?}", s);
    println!("numerical rank:  {}", matcore::numerical_rank(&a)?);

    for k in 1..=4 {
        let err = (&a - matcore::best_rank_k(&a, k)?).norm();
        println!("k = {k}: ||A - A_k||_F = {err:.3e} (tail {:.3e})", matcore::tail_frobenius(&a, k)?);
    }

    let p = matcore::pinv(&a)?;
    println!("||A A^+ A - A||_F = {:.2e}", (&a * &p * &a - &a).norm());

    let c = matcore::select_columns(&a, &[0, 3, 5]);
    let proj = matcore::project_onto_columns(&c, &a)?;
    println!("residual after projecting onto 3 columns: {:.3e}", (&a - proj).norm());

    let lev = matcore::leverage_scores(&a, 3, Axis::Columns)?;
    println!("column leverage (k = 3): {:.3?}  sum {:.6}", lev.scores, lev.sum());

    let n = matcore::norms(&a)?;
    println!("norms: F {:.4}  2 {:.4}  * {:.4}", n.frobenius, n.spectral, n.nuclear);
    Ok(())
}
