// Rotating a network away from itself along `Q^α`.
//
// Writes `alpha,mean,std` CSV for the soft matching correlation to stdout.

use rsk::experiments::{rotation_sweep, RotationSweepConfig};
use rsk::metrics::MetricKind;
use rsk::{preprocess, rng, ActivationMatrix, Preprocessing};

pub fn run_example() -> rsk::Result<()> {
    let raw = ActivationMatrix::raw(rng::standard_normal_matrix(120, 16, &mut rng::seeded(5)));
    let x = preprocess(&raw, Preprocessing::CenteredUnitColumns)?;
    let cfg = RotationSweepConfig::evenly_spaced(10, MetricKind::SoftMatchingCorrelation, 42, 5)?;
    let res = rotation_sweep(&x, &x, &cfg)?;
    print!("{}", res.to_csv());

    let x = preprocess(&raw, Preprocessing::CenteredFrobUnit)?;
    let cfg = RotationSweepConfig::evenly_spaced(4, MetricKind::Procrustes, 42, 5)?;
    let flat = rotation_sweep(&x, &x, &cfg)?;
    println!("# procrustes along the same sweep: {:?}", flat.mean);
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
