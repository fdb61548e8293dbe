// Writing activations as CSV and rawbin, then comparing them through the
// same request type the `rsk compare` command uses.

use rsk::cli::{run_compare, ComparisonRequest};
use rsk::io::{save_activations, ActivationFile, ActivationFormat};
use rsk::metrics::MetricKind;
use rsk::rng;

pub fn run_example() -> rsk::Result<()> {
    let dir = std::env::temp_dir().join(format!("rsk-file-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut g = rng::seeded(8);

    let x = ActivationFile::new(dir.join("x.csv"), ActivationFormat::Csv);
    let y = ActivationFile::new(dir.join("y.rsk"), ActivationFormat::Rawbin);
    save_activations(&x, &rng::standard_normal_matrix(30, 5, &mut g))?;
    save_activations(&y, &rng::standard_normal_matrix(30, 5, &mut g))?;

    let req = ComparisonRequest {
        x: x.path,
        ys: vec![y.path],
        metrics: vec![MetricKind::SoftMatchingDistance, MetricKind::OneToOneDistance],
        preprocessing: None,
        seed: 0,
        include_witness: false,
    };
    let out = run_compare(&req)?;
    println!("{}", serde_json::to_string_pretty(&out["results"][0]["equal_size_scaling"]).unwrap());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
