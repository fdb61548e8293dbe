// Soft matching between networks of unequal width, and the equal-width
// case where the optimal plan is a scaled permutation.

use rsk::assignment::one_to_one_matching;
use rsk::transport::soft_matching;
use rsk::{preprocess, rng, ActivationMatrix, Preprocessing};

pub fn run_example() -> rsk::Result<()> {
    let mut g = rng::seeded(3);
    let mut net = |units| {
        let raw = ActivationMatrix::raw(rng::standard_normal_matrix(40, units, &mut g));
        preprocess(&raw, Preprocessing::CenteredFrobUnit)
    };
    let (x, y) = (net(4)?, net(6)?);

    let (d, sol) = soft_matching(&x, &y)?;
    println!("d_T = {d:.6} after {} pivots ({:?})", sol.iterations, sol.status);
    println!("plan (rows sum to 1/4, columns to 1/6):");
    for i in 0..4 {
        let row: Vec<String> = sol.plan.matrix().row(i).iter().map(|v| format!("{v:.4}")).collect();
        println!("  {}", row.join(" "));
    }

    let (a, b) = (net(5)?, net(5)?);
    let (dp, hard) = one_to_one_matching(&a, &b)?;
    let (dt, soft) = soft_matching(&a, &b)?;
    println!("equal widths: d_P = {dp:.6}, sqrt(5) * d_T = {:.6}", 5f64.sqrt() * dt);
    println!("hard mapping {:?}, plan as permutation {:?}", hard.mapping, soft.plan.as_permutation(1e-9));
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
