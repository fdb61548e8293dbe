// Every metric on a pair of random networks of different widths.

use rsk::metrics::{metric_value, MetricKind};
use rsk::{preprocess, rng, ActivationMatrix};

pub fn run_example() -> rsk::Result<()> {
    let mut g = rng::seeded(7);
    let x = ActivationMatrix::raw(rng::standard_normal_matrix(50, 8, &mut g));
    let y = ActivationMatrix::raw(rng::standard_normal_matrix(50, 12, &mut g));

    println!("{:<28} {:>10}", "metric", "value");
    for kind in MetricKind::ALL {
        if kind == MetricKind::OneToOneDistance {
            continue; // needs equal widths
        }
        let mode = kind.default_preprocessing();
        let v = metric_value(kind, &preprocess(&x, mode)?, &preprocess(&y, mode)?)?;
        println!("{:<28} {:>10.6}", kind.name(), v);
    }
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
