//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::time::Instant;

use rand::RngExt;
use rsk::assignment::*;
use rsk::experiments::*;
use rsk::linalg::*;
use rsk::metrics::*;
use rsk::preprocess::correlations;
use rsk::rng;
use rsk::transport::*;
use rsk::{preprocess, ActivationMatrix, Matrix, Preprocessing};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fig3a_table() -> Outcome {
    let (x, y, z) = build_fig3a_networks();
    let semi = |a: &ActivationMatrix, b: &ActivationMatrix| semi_matching_score(&correlations(a, b).unwrap());
    let rect = |a: &ActivationMatrix, b: &ActivationMatrix| rectangular_matching_score(&correlations(a, b).unwrap()).unwrap();
    let soft = |a: &ActivationMatrix, b: &ActivationMatrix| soft_matching_correlation(a, b).unwrap();
    let rows = [
        ("semi(X,Y)", semi(&x, &y), 0.0),
        ("semi(X,Z)", semi(&x, &z), 1.0),
        ("semi(Y,Z)", semi(&y, &z), 1.0),
        ("rect(X,Z)", rect(&x, &z), 1.0),
        ("soft(X,Y)", soft(&x, &y), 0.0),
        ("soft(X,Z)", soft(&x, &z), 0.5),
        ("soft(Y,Z)", soft(&y, &z), 0.5),
    ];
    let worst = rows.iter().map(|(_, v, e)| (v - e).abs()).fold(0.0, f64::max);
    let table: Vec<String> = rows.iter().map(|(n, v, _)| format!("{n}={v:.3}")).collect();
    check(worst <= 1e-9, format!("{} max err {worst:.1e}", table.join(" ")))
}

fn sqrt_n_equivalence() -> Outcome {
    let mut g = rng::seeded(1001);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = g.random_range(2..=12usize);
        let m = g.random_range(5..=40usize);
        let x = common::random_activations(m, n, Preprocessing::CenteredFrobUnit, &mut g);
        let y = common::random_activations(m, n, Preprocessing::CenteredFrobUnit, &mut g);
        let dp = one_to_one_matching_distance(&x, &y).map_err(|e| e.to_string())?;
        let dt = soft_matching_distance(&x, &y).map_err(|e| e.to_string())?;
        worst = worst.max((dp - (n as f64).sqrt() * dt).abs() / dp);
    }
    check(worst <= 1e-8, format!("50 pairs, max relative err {worst:.1e}"))
}

fn procrustes_equivalence() -> Outcome {
    let mut g = rng::seeded(1002);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = g.random_range(2..=12usize);
        let m = g.random_range(n + 1..=40usize);
        let x = common::random_activations(m, n, Preprocessing::CenteredFrobUnit, &mut g);
        let y = common::random_activations(m, n, Preprocessing::CenteredFrobUnit, &mut g);
        let (_, residual) = procrustes_alignment(&x, &y).map_err(|e| e.to_string())?;
        let formula = procrustes_distance(&x, &y).map_err(|e| e.to_string())?;
        worst = worst.max((residual - formula).abs());
    }
    check(worst <= 1e-8, format!("50 pairs, max err {worst:.1e}"))
}

fn assignment_exactness() -> Outcome {
    let mut g = rng::seeded(1003);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = g.random_range(1..=7usize);
        let c = rng::uniform_matrix(n, n, 0.0, 10.0, &mut g);
        let got = solve_lap_min_cost(&c).map_err(|e| e.to_string())?.objective;
        worst = worst.max((got - common::brute_force_lap(&c)).abs());
    }
    let mut worst_rect = 0.0f64;
    for _ in 0..200 {
        let nx = g.random_range(1..=4usize);
        let ny = g.random_range(nx..=7usize);
        let r = rng::uniform_matrix(nx, ny, -1.0, 1.0, &mut g);
        let got = solve_rectangular_max_score(&r).map_err(|e| e.to_string())?.objective;
        worst_rect = worst_rect.max((got - common::brute_force_injective_max(&r)).abs());
    }
    check(
        worst <= 1e-12 && worst_rect <= 1e-12,
        format!("200 square max err {worst:.1e}, 200 rectangular max err {worst_rect:.1e}"),
    )
}

fn transport_exactness() -> Outcome {
    let mut g = rng::seeded(1004);
    let (mut obj, mut marg, mut perm) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let nx = g.random_range(1..=8usize);
        let ny = g.random_range(1..=8usize);
        let c = rng::uniform_matrix(nx, ny, 0.0, 4.0, &mut g);
        let sol = solve_uniform_transport(&c, Objective::Minimize).map_err(|e| e.to_string())?;
        obj = obj.max((sol.objective - common::dense_simplex_transport(&c)).abs());
        for s in sol.plan.row_sums() {
            marg = marg.max((s - 1.0 / nx as f64).abs());
        }
        for s in sol.plan.column_sums() {
            marg = marg.max((s - 1.0 / ny as f64).abs());
        }
        if nx == ny {
            let scaled = sol.plan.matrix().scale(nx as f64);
            let nearest = scaled.map(|v| v.round());
            let is_perm = (0..nx).all(|i| nearest.row(i).iter().sum::<f64>() == 1.0)
                && (0..nx).all(|j| nearest.column(j).iter().sum::<f64>() == 1.0);
            if !is_perm {
                return Err("equal-size plan is not near a permutation".into());
            }
            perm = perm.max(scaled.max_abs_diff(&nearest));
        }
    }
    check(
        obj <= 1e-8 && marg <= 1e-9 && perm <= 1e-9,
        format!("100 problems, objective err {obj:.1e}, marginal err {marg:.1e}, permutation err {perm:.1e}"),
    )
}

fn metric_axioms() -> Outcome {
    let mut g = rng::seeded(1005);
    let triples: Vec<_> = (0..100)
        .map(|_| {
            let m = 15;
            let mut draw = || {
                let n = g.random_range(2..=10usize);
                common::random_activations(m, n, Preprocessing::CenteredFrobUnit, &mut g)
            };
            (draw(), draw(), draw())
        })
        .collect();
    let rep = check_metric_axioms(
        soft_matching_distance,
        NuisanceClass::Permutation,
        &triples,
        1e-8,
        1006,
    )
    .map_err(|e| e.to_string())?;
    check(
        rep.max_symmetry_violation <= 1e-9 && rep.max_triangle_violation <= 1e-8 && rep.max_identity_value <= 1e-9,
        format!(
            "100 triples, symmetry {:.1e}, triangle {:.1e}, permutation identity {:.1e}",
            rep.max_symmetry_violation, rep.max_triangle_violation, rep.max_identity_value
        ),
    )
}

fn rotation_machinery() -> Outcome {
    let mut g = rng::seeded(1007);
    let (mut roundtrip, mut ends) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = g.random_range(1..=16usize);
        let q = sample_haar_special_orthogonal_with(n, &mut g).map_err(|e| e.to_string())?;
        let l = so_log(&q).map_err(|e| e.to_string())?;
        roundtrip = roundtrip.max(matrix_exp(&l).map_err(|e| e.to_string())?.max_abs_diff(q.matrix()));
        let q0 = fractional_orthogonal_power(&q, 0.0).map_err(|e| e.to_string())?;
        let q1 = fractional_orthogonal_power(&q, 1.0).map_err(|e| e.to_string())?;
        ends = ends.max(q0.matrix().max_abs_diff(&Matrix::identity(n)));
        ends = ends.max(q1.matrix().max_abs_diff(q.matrix()));
    }
    // Block-diagonal plane rotations: the square root halves every angle.
    let angles = [0.3, 1.2, 2.9];
    let block = |scale: f64| {
        Matrix::from_fn(6, 6, |p, q| {
            if p / 2 == q / 2 {
                plane_rotation(angles[p / 2] * scale).matrix()[(p % 2, q % 2)]
            } else {
                0.0
            }
        })
    };
    let q = OrthogonalMatrix::special(block(1.0)).map_err(|e| e.to_string())?;
    let half = fractional_orthogonal_power(&q, 0.5).map_err(|e| e.to_string())?;
    let half_err = half.matrix().max_abs_diff(&block(0.5));
    check(
        roundtrip <= 1e-8 && ends <= 1e-8 && half_err <= 1e-12,
        format!("50 samples, exp(log Q) err {roundtrip:.1e}, endpoint err {ends:.1e}, half-angle err {half_err:.1e}"),
    )
}

fn rotation_sweep_contrast() -> Outcome {
    let raw = ActivationMatrix::raw(rng::standard_normal_matrix(200, 32, &mut rng::seeded(1008)));
    let alphas = vec![0.0, 0.25, 0.5, 0.75, 1.0];
    let unit = preprocess(&raw, Preprocessing::CenteredUnitColumns).map_err(|e| e.to_string())?;
    let cfg = RotationSweepConfig::new(alphas.clone(), MetricKind::SoftMatchingCorrelation, 1009, 20).map_err(|e| e.to_string())?;
    let soft = rotation_sweep(&unit, &unit, &cfg).map_err(|e| e.to_string())?;
    let frob = preprocess(&raw, Preprocessing::CenteredFrobUnit).map_err(|e| e.to_string())?;
    let cfg = RotationSweepConfig::new(alphas, MetricKind::Procrustes, 1009, 20).map_err(|e| e.to_string())?;
    let proc = rotation_sweep(&frob, &frob, &cfg).map_err(|e| e.to_string())?;

    let start_err = soft.values.iter().map(|row| (row[0] - 1.0).abs()).fold(0.0, f64::max);
    let margin = soft.values.iter().map(|row| row[0] - row[row.len() - 1]).fold(f64::INFINITY, f64::min);
    let spread = proc
        .values
        .iter()
        .map(|row| {
            let hi = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = row.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .fold(0.0, f64::max);
    let means: Vec<String> = soft.mean.iter().map(|v| format!("{v:.3}")).collect();
    check(
        start_err <= 1e-9 && margin >= 0.2 && spread <= 1e-8,
        format!(
            "soft-corr mean [{}], min drop {margin:.3}, procrustes spread {spread:.1e}",
            means.join(", ")
        ),
    )
}

fn linear_predictivity_checks() -> Outcome {
    let mut g = rng::seeded(1010);
    let model = rng::standard_normal_matrix(500, 20, &mut g);
    let w = rng::standard_normal_matrix(20, 5, &mut g);
    let cfg = PredictivityConfig::with_seed(1011);
    let clean = linear_predictivity(
        &ActivationMatrix::raw(model.clone()),
        &ActivationMatrix::raw(model.matmul(&w).unwrap()),
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let noise = linear_predictivity(
        &ActivationMatrix::raw(model.clone()),
        &ActivationMatrix::raw(rng::standard_normal_matrix(500, 5, &mut g)),
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let bound = 3.0 / (noise.n_test as f64).sqrt();

    let b = rng::standard_normal_matrix(500, 5, &mut g);
    let mut coef = 0.0f64;
    for lambda in ridge_grid() {
        let fit = fit_ridge(&model, &b, lambda).map_err(|e| e.to_string())?;
        coef = coef.max(fit.weights.max_abs_diff(&common::ridge_normal_equations(&model, &b, lambda)));
    }
    let grid = ridge_grid();
    let ratios_ok = grid.windows(2).all(|p| ((p[1] / p[0]).log10() - 8.0 / 7.0).abs() < 1e-12);
    let grid_ok = grid.len() == 8 && (grid[0] - 1e-4).abs() < 1e-16 && (grid[7] - 1e4).abs() < 1e-9 && ratios_ok;
    check(
        clean.mean_test_r >= 0.999 && noise.mean_test_r.abs() <= bound && coef <= 1e-8 && grid_ok,
        format!(
            "clean R {:.5}, noise R {:.3} (bound {bound:.3}), coefficient err {coef:.1e}, grid of {}",
            clean.mean_test_r,
            noise.mean_test_r,
            grid.len()
        ),
    )
}

fn performance() -> Outcome {
    let mut g = rng::seeded(1012);
    let x = common::random_activations(1000, 500, Preprocessing::CenteredFrobUnit, &mut g);
    let y = common::random_activations(1000, 500, Preprocessing::CenteredFrobUnit, &mut g);
    let start = Instant::now();
    let (d, sol) = soft_matching(&x, &y).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    check(
        secs < 30.0,
        format!("500x500, M=1000: {secs:.2} s, {} pivots, d={d:.4}", sol.iterations),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fig3a table", fig3a_table),
        ("sqrt-N equivalence", sqrt_n_equivalence),
        ("procrustes formula", procrustes_equivalence),
        ("assignment exactness", assignment_exactness),
        ("transport exactness", transport_exactness),
        ("metric axioms", metric_axioms),
        ("rotation machinery", rotation_machinery),
        ("rotation sweep contrast", rotation_sweep_contrast),
        ("linear predictivity", linear_predictivity_checks),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[{:>2}] PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:>2}] FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
