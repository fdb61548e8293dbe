//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rsk::rng::{self, SeededRng};
use rsk::{preprocess, ActivationMatrix, Matrix, Preprocessing};

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &DMatrix<f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values as square roots of the eigenvalues of `aᵀa`, from
/// nalgebra's symmetric eigensolver, sorted nonincreasing.
pub fn singular_values_by_eigen(a: &Matrix) -> Vec<f64> {
    let na = to_na(a);
    let gram = if a.rows() >= a.cols() { na.transpose() * &na } else { &na * na.transpose() };
    let eig = gram.symmetric_eigen();
    let mut s: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Minimum of `Σ c[i][σ(i)]` over all permutations.
pub fn brute_force_lap(c: &Matrix) -> f64 {
    let mut best = f64::INFINITY;
    for_each_permutation(c.rows(), |p| {
        let v: f64 = p.iter().enumerate().map(|(i, &j)| c[(i, j)]).sum();
        best = best.min(v);
    });
    best
}

/// Maximum of `Σ r[i][σ(i)]` over all injective maps rows → columns.
pub fn brute_force_injective_max(r: &Matrix) -> f64 {
    fn rec(r: &Matrix, i: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        if i == r.rows() {
            *best = best.max(acc);
            return;
        }
        for j in 0..r.cols() {
            if !used[j] {
                used[j] = true;
                rec(r, i + 1, used, acc + r[(i, j)], best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    rec(r, 0, &mut vec![false; r.cols()], 0.0, &mut best);
    best
}

/// Minimum of `Σ pᵢⱼ cᵢⱼ` over the transportation polytope with uniform
/// marginals, via a dense two-phase tableau simplex with Bland's rule on the
/// explicit LP (one redundant column-sum constraint dropped).
pub fn dense_simplex_transport(c: &Matrix) -> f64 {
    let (nx, ny) = c.shape();
    let nvar = nx * ny;
    // Constraints: nx row sums, then ny - 1 column sums.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..nx {
        let mut a = vec![0.0; nvar];
        for j in 0..ny {
            a[i * ny + j] = 1.0;
        }
        rows.push((a, 1.0 / nx as f64));
    }
    for j in 0..ny - 1 {
        let mut a = vec![0.0; nvar];
        for i in 0..nx {
            a[i * ny + j] = 1.0;
        }
        rows.push((a, 1.0 / ny as f64));
    }
    let cost: Vec<f64> = c.as_slice().to_vec();
    tableau_simplex(&rows, &cost)
}

/// min costᵀx s.t. A x = b (b ≥ 0), x ≥ 0. Panics if infeasible/unbounded.
pub fn tableau_simplex(rows: &[(Vec<f64>, f64)], cost: &[f64]) -> f64 {
    const EPS: f64 = 1e-12;
    let m = rows.len();
    let n = cost.len();
    let width = n + m + 1; // structural, artificial, rhs
    let mut t: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let mut r = vec![0.0; width];
            r[..n].copy_from_slice(a);
            r[n + k] = 1.0;
            r[width - 1] = *b;
            r
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    let pivot = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, r: usize, col: usize| {
        let pv = t[r][col];
        t[r].iter_mut().for_each(|v| *v /= pv);
        for k in 0..t.len() {
            if k != r && t[k][col] != 0.0 {
                let f = t[k][col];
                let src = t[r].clone();
                t[k].iter_mut().zip(&src).for_each(|(v, s)| *v -= f * s);
            }
        }
        basis[r] = col;
    };

    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, obj: &[f64], allowed: usize| {
        loop {
            // reduced cost d_j = obj_j - Σ obj_B · column
            let mut entering = None;
            for j in 0..allowed {
                if basis.contains(&j) {
                    continue;
                }
                let d = obj[j] - (0..t.len()).map(|r| obj[basis[r]] * t[r][j]).sum::<f64>();
                if d < -EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else { return };
            let mut best: Option<(f64, usize)> = None;
            for r in 0..t.len() {
                if t[r][col] > EPS {
                    let ratio = t[r][width - 1] / t[r][col];
                    let better = match best {
                        None => true,
                        Some((b, br)) => ratio < b - EPS || (ratio <= b + EPS && basis[r] < basis[br]),
                    };
                    if better {
                        best = Some((ratio, r));
                    }
                }
            }
            let (_, r) = best.expect("LP unbounded");
            pivot(t, basis, r, col);
        }
    };

    // Phase 1: minimize the sum of artificials.
    let mut phase1 = vec![0.0; n + m];
    phase1[n..].iter_mut().for_each(|v| *v = 1.0);
    run(&mut t, &mut basis, &phase1, n + m);
    let infeas: f64 = (0..m).filter(|&r| basis[r] >= n).map(|r| t[r][width - 1]).sum();
    assert!(infeas < 1e-9, "LP infeasible");
    // Drive zero-valued artificials out of the basis.
    for r in 0..m {
        if basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| t[r][j].abs() > 1e-9) {
                pivot(&mut t, &mut basis, r, col);
            }
        }
    }
    let mut phase2 = cost.to_vec();
    phase2.extend(std::iter::repeat(0.0).take(m));
    run(&mut t, &mut basis, &phase2, n);
    (0..m).filter(|&r| basis[r] < n).map(|r| cost[basis[r]] * t[r][width - 1]).sum()
}

/// Ridge coefficients from a direct solve of `(AᵀA + λI) w = Aᵀb` on
/// column-centered data.
pub fn ridge_normal_equations(a: &Matrix, b: &Matrix, lambda: f64) -> Matrix {
    let center = |m: &Matrix| {
        let mut na = to_na(m);
        for j in 0..na.ncols() {
            let mean = na.column(j).mean();
            na.column_mut(j).iter_mut().for_each(|v| *v -= mean);
        }
        na
    };
    let (ca, cb) = (center(a), center(b));
    let lhs = ca.transpose() * &ca + DMatrix::identity(a.cols(), a.cols()) * lambda;
    let rhs = ca.transpose() * cb;
    from_na(&lhs.lu().solve(&rhs).expect("nonsingular"))
}

/// Pearson correlation computed from sums, without centering first.
pub fn pearson_by_sums(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    let sab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let saa: f64 = a.iter().map(|x| x * x).sum();
    let sbb: f64 = b.iter().map(|x| x * x).sum();
    (n * sab - sa * sb) / ((n * saa - sa * sa).sqrt() * (n * sbb - sb * sb).sqrt())
}

pub fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

pub fn random_activations(m: usize, n: usize, mode: Preprocessing, rng: &mut SeededRng) -> ActivationMatrix {
    let raw = ActivationMatrix::raw(rng::standard_normal_matrix(m, n, rng));
    preprocess(&raw, mode).expect("gaussian columns are not degenerate")
}
