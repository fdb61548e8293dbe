// Ridge predictivity of a noisy linear readout and of pure noise.

use rsk::experiments::{linear_predictivity, PredictivityConfig};
use rsk::{rng, ActivationMatrix};

pub fn run_example() -> rsk::Result<()> {
    let mut g = rng::seeded(21);
    let model = rng::standard_normal_matrix(300, 12, &mut g);
    let w = rng::standard_normal_matrix(12, 4, &mut g);
    let noise = rng::standard_normal_matrix(300, 4, &mut g).scale(0.5);
    let readout = model.matmul(&w)?.add(&noise)?;
    let unrelated = rng::standard_normal_matrix(300, 4, &mut g);

    let cfg = PredictivityConfig::with_seed(1);
    for (name, target) in [("readout", readout), ("unrelated", unrelated)] {
        let rep = linear_predictivity(&ActivationMatrix::raw(model.clone()), &ActivationMatrix::raw(target), &cfg)?;
        println!(
            "{name:<10} penalty {:>9.3e}  mean test R {:.3}  (n_test = {})",
            rep.chosen_penalty, rep.mean_test_r, rep.n_test
        );
    }
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
