// Two orthogonal three-unit networks and their six-unit union.
//
// Semi-matching scores each network as a perfect match for the union, so
// it cannot tell `X` from `Y` through `Z`; soft matching penalizes the
// unmatched half of `Z` and rectangular matching is not symmetric.

use rsk::assignment::{rectangular_matching_score, semi_matching_score};
use rsk::experiments::build_fig3a_networks;
use rsk::preprocess::correlations;
use rsk::transport::soft_matching_correlation;

pub fn run_example() -> rsk::Result<()> {
    let (x, y, z) = build_fig3a_networks();
    let pairs = [("X", "Y", &x, &y), ("X", "Z", &x, &z), ("Y", "Z", &y, &z)];

    println!("pair   semi    rect    soft");
    for (a, b, p, q) in pairs {
        let r = correlations(p, q)?;
        println!(
            "{a},{b}    {:.3}   {:.3}   {:.3}",
            semi_matching_score(&r),
            rectangular_matching_score(&r)?,
            soft_matching_correlation(p, q)?
        );
    }
    let zx = semi_matching_score(&correlations(&z, &x)?);
    println!("semi(Z,X) = {zx:.3}");
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
