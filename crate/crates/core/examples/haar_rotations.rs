// Haar rotations, their logarithms, and fractional powers.

use rsk::linalg::{fractional_orthogonal_power, matrix_exp, sample_haar_special_orthogonal, so_log};
use rsk::Matrix;

pub fn run_example() -> rsk::Result<()> {
    let q = sample_haar_special_orthogonal(5, 2024)?;
    println!("det Q = {:.12}", q.determinant());

    let l = so_log(&q)?;
    println!("|L + Lᵀ|        = {:.1e}", l.add(&l.transpose())?.max_abs());
    println!("|exp(L) - Q|    = {:.1e}", matrix_exp(&l)?.max_abs_diff(q.matrix()));

    let half = fractional_orthogonal_power(&q, 0.5)?;
    let squared = half.compose(&half)?;
    println!("|Q^½ Q^½ - Q|   = {:.1e}", squared.matrix().max_abs_diff(q.matrix()));

    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let qa = fractional_orthogonal_power(&q, alpha)?;
        let dist = qa.matrix().sub(&Matrix::identity(5))?.frobenius_norm();
        println!("alpha {alpha:.2}: |Q^a - I| = {dist:.4}");
    }
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
