// Empirical symmetry, triangle inequality and nuisance invariance.

use rsk::cli::random_triples;
use rsk::metrics::{check_metric_axioms, metric_value, MetricKind, NuisanceClass};
use rsk::Preprocessing;

pub fn run_example() -> rsk::Result<()> {
    let triples = random_triples(25, 15, 8, false, Preprocessing::CenteredFrobUnit, 3)?;
    for (kind, nuisance) in [
        (MetricKind::SoftMatchingDistance, NuisanceClass::Permutation),
        (MetricKind::Procrustes, NuisanceClass::Orthogonal),
    ] {
        let rep = check_metric_axioms(|a, b| metric_value(kind, a, b), nuisance, &triples, 1e-8, 9)?;
        println!(
            "{:<24} symmetry {:.1e}  triangle {:.1e} ({} violations)  identity {:.1e}",
            kind.name(),
            rep.max_symmetry_violation,
            rep.max_triangle_violation,
            rep.triangle_violations,
            rep.max_identity_value
        );
    }
    Ok(())
}

fn main() -> rsk::Result<()> {
    run_example()
}
