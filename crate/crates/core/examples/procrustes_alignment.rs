// Recovering a hidden rotation with orthogonal Procrustes.

use rsk::linalg::sample_haar_special_orthogonal;
use rsk::metrics::{procrustes_alignment, procrustes_distance};
use rsk::transport::soft_matching_distance;
use rsk::{preprocess, rng, ActivationMatrix, Preprocessing};

pub fn run_example() -> rsk::Result<()> {
    let mut g = rng::seeded(11);
    let x = preprocess(
        &ActivationMatrix::raw(rng::standard_normal_matrix(60, 6, &mut g)),
        Preprocessing::CenteredFrobUnit,
    )?;
    let q = sample_haar_special_orthogonal(6, 12)?;
    let y = preprocess(&x.transform(q.matrix())?, Preprocessing::CenteredFrobUnit)?;

    let (found, residual) = procrustes_alignment(&y, &x)?;
    println!("procrustes distance  {:.2e}", procrustes_distance(&x, &y)?);
    println!("alignment residual   {residual:.2e}");
    println!("rotation error       {:.2e}", found.matrix().max_abs_diff(q.matrix()));
    println!("soft matching d_T    {:.4}  (rotations are not a nuisance here)", soft_matching_distance(&x, &y)?);
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
