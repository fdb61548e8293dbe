mod common;

use proptest::prelude::*;
use rsk::linalg::*;
use rsk::rng;

#[test]
fn svd_matches_eigen_oracle_on_random_5x4() {
    let a = rng::standard_normal_matrix(5, 4, &mut rng::seeded(100));
    let s = svd(&a).unwrap().s;
    let oracle = common::singular_values_by_eigen(&a);
    for (x, y) in s.iter().zip(&oracle) {
        assert!((x - y).abs() < 1e-8, "{s:?} vs {oracle:?}");
    }
}

#[test]
fn nuclear_norm_matches_eigen_oracle_on_random_6x3() {
    let a = rng::standard_normal_matrix(6, 3, &mut rng::seeded(101));
    let expect: f64 = common::singular_values_by_eigen(&a).iter().sum();
    assert!((nuclear_norm(&a).unwrap() - expect).abs() < 1e-8);
}

#[test]
fn svd_invariants_on_200_random_matrices() {
    let mut g = rng::seeded(102);
    use rand::RngExt;
    for _ in 0..200 {
        let (m, n) = (g.random_range(1..=32usize), g.random_range(1..=32usize));
        let a = rng::standard_normal_matrix(m, n, &mut g);
        let r = svd(&a).unwrap();
        let k = m.min(n);
        assert_eq!(r.s.len(), k);
        assert!(r.s.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.s.iter().all(|&v| v >= 0.0));
        let smax = r.s[0].max(1.0);
        assert!(r.reconstruct().max_abs_diff(&a) <= 1e-10 * smax);
        assert!(r.u.t_matmul(&r.u).unwrap().max_abs_diff(&Matrix::identity(k)) < 1e-10);
        let vvt = r.vt.matmul(&r.vt.transpose()).unwrap();
        assert!(vvt.max_abs_diff(&Matrix::identity(k)) < 1e-10);
    }
}

#[test]
fn svd_is_deterministic() {
    let a = rng::standard_normal_matrix(9, 7, &mut rng::seeded(103));
    let (r1, r2) = (svd(&a).unwrap(), svd(&a).unwrap());
    assert_eq!(r1.s, r2.s);
    assert_eq!(r1.u, r2.u);
}

#[test]
fn haar_det_is_one_for_small_dimensions() {
    for n in 1..=16 {
        for seed in 0..5 {
            let q = sample_haar_special_orthogonal(n, seed).unwrap();
            assert!((q.determinant() - 1.0).abs() < 1e-8);
            assert!(q.matrix().t_matmul(q.matrix()).unwrap().max_abs_diff(&Matrix::identity(n)) < 1e-10);
        }
    }
}

#[test]
fn haar_entries_have_zero_mean() {
    // Var(q00) = 1/n for Haar measure on SO(n), n >= 2.
    let mut g = rng::seeded(104);
    let samples = 10_000;
    let mean: f64 = (0..samples)
        .map(|_| sample_haar_special_orthogonal_with(3, &mut g).unwrap().matrix()[(0, 0)])
        .sum::<f64>()
        / samples as f64;
    let sigma = (1.0f64 / 3.0).sqrt() / (samples as f64).sqrt();
    assert!(mean.abs() < 3.0 * sigma, "mean {mean}");
}

fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn haar_law_is_left_invariant() {
    // Two-sample KS on the trace (a class function) and on one entry, which
    // is not a class function, comparing Q with R·Q for a fixed rotation R.
    let n = 4;
    let count = 4000;
    let r = sample_haar_special_orthogonal(n, 9999).unwrap();
    let mut g1 = rng::seeded(105);
    let mut g2 = rng::seeded(106);
    let mut plain_tr = Vec::new();
    let mut moved_tr = Vec::new();
    let mut plain_e = Vec::new();
    let mut moved_e = Vec::new();
    for _ in 0..count {
        let q = sample_haar_special_orthogonal_with(n, &mut g1).unwrap();
        plain_tr.push(q.matrix().trace());
        plain_e.push(q.matrix()[(0, 1)]);
        let q2 = sample_haar_special_orthogonal_with(n, &mut g2).unwrap();
        let rq = r.compose(&q2).unwrap();
        moved_tr.push(rq.matrix().trace());
        moved_e.push(rq.matrix()[(0, 1)]);
    }
    // Critical value for alpha = 0.001.
    let crit = 1.95 * (2.0 / count as f64).sqrt();
    assert!(ks_statistic(plain_tr, moved_tr) < crit);
    assert!(ks_statistic(plain_e, moved_e) < crit);
}

#[test]
fn log_exp_roundtrip_on_so6() {
    let q = sample_haar_special_orthogonal(6, 107).unwrap();
    let l = so_log(&q).unwrap();
    assert!(l.add(&l.transpose()).unwrap().max_abs() < 1e-12, "log is skew");
    assert!(matrix_exp(&l).unwrap().max_abs_diff(q.matrix()) < 1e-8);
}

#[test]
fn exp_of_random_skew_is_orthogonal() {
    let g = rng::standard_normal_matrix(4, 4, &mut rng::seeded(108));
    let a = g.sub(&g.transpose()).unwrap();
    let e = matrix_exp(&a).unwrap();
    assert!(e.t_matmul(&e).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-8);
}

#[test]
fn exp_agrees_with_nalgebra() {
    let a = rng::standard_normal_matrix(5, 5, &mut rng::seeded(109)).scale(2.0);
    let ours = matrix_exp(&a).unwrap();
    let theirs = common::from_na(&common::to_na(&a).exp());
    assert!(ours.max_abs_diff(&theirs) <= 1e-10 * theirs.max_abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nuclear_norm_is_transpose_invariant(seed in any::<u64>(), m in 1usize..12, n in 1usize..12) {
        let a = rng::standard_normal_matrix(m, n, &mut rng::seeded(seed));
        let d = nuclear_norm(&a).unwrap() - nuclear_norm(&a.transpose()).unwrap();
        prop_assert!(d.abs() < 1e-10);
    }

    #[test]
    fn fractional_powers_form_a_semigroup(seed in any::<u64>(), n in 2usize..9, a in 0.0f64..1.0, t in 0.0f64..1.0) {
        let b = (1.0 - a) * t;
        let q = sample_haar_special_orthogonal(n, seed).unwrap();
        let qa = fractional_orthogonal_power(&q, a).unwrap();
        let qb = fractional_orthogonal_power(&q, b).unwrap();
        let qab = fractional_orthogonal_power(&q, a + b).unwrap();
        prop_assert!(qa.compose(&qb).unwrap().matrix().max_abs_diff(qab.matrix()) < 1e-7);
        prop_assert!((qa.determinant() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn svd_handles_rank_deficient_and_padded_inputs() {
    let mut g = rng::seeded(110);
    let a = rng::standard_normal_matrix(8, 2, &mut g);
    let b = rng::standard_normal_matrix(2, 6, &mut g);
    let low_rank = a.matmul(&b).unwrap();
    let padded = Matrix::from_fn(9, 9, |i, j| if i < 8 && j < 6 { low_rank[(i, j)] } else { 0.0 });
    for m in [low_rank, padded] {
        let r = svd(&m).unwrap();
        assert!(r.reconstruct().max_abs_diff(&m) < 1e-10);
        assert!(r.s[2] < 1e-10);
        let k = r.s.len();
        assert!(r.u.t_matmul(&r.u).unwrap().max_abs_diff(&Matrix::identity(k)) < 1e-10);
    }
}
