//! Hard matchings between units: square and rectangular linear assignment
//! and the row-wise semi-matching.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::preprocess::{squared_distance_costs, ActivationMatrix, CorrelationMatrix};

/// A matching of every row to a distinct column (or, for semi-matching,
/// to any column).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentResult {
    /// `mapping[i]` is the column matched to row `i`.
    pub mapping: Vec<usize>,
    /// Total cost for minimization problems, mean score for score functions.
    pub objective: f64,
}

impl AssignmentResult {
    /// Columns no row is matched to, in increasing order.
    pub fn unmatched_columns(&self, n_cols: usize) -> Vec<usize> {
        let mut hit = vec![false; n_cols];
        for &j in &self.mapping {
            hit[j] = true;
        }
        (0..n_cols).filter(|&j| !hit[j]).collect()
    }

    pub fn is_injective(&self, n_cols: usize) -> bool {
        let mut hit = vec![false; n_cols];
        self.mapping.iter().all(|&j| j < n_cols && !std::mem::replace(&mut hit[j], true))
    }
}

/// Minimum-cost assignment for a square cost matrix.
pub fn solve_lap_min_cost(c: &Matrix) -> Result<AssignmentResult> {
    if !c.is_square() {
        return Err(Error::Dimension(format!(
            "linear assignment needs a square cost matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    solve_rectangular_min_cost(c)
}

/// Minimum-cost injective assignment of rows to columns, `rows ≤ cols`.
///
/// Shortest augmenting paths with dual potentials (the Jonker–Volgenant /
/// Hungarian scheme), one row at a time, O(rows² · cols). Ties between
/// equally short paths go to the lowest column index.
pub fn solve_rectangular_min_cost(c: &Matrix) -> Result<AssignmentResult> {
    let (n, m) = c.shape();
    if n > m {
        return Err(Error::Infeasible(format!(
            "no injective matching from {n} rows into {m} columns"
        )));
    }
    if !c.is_finite() {
        return Err(Error::Numerical("assignment costs must be finite".into()));
    }
    // 1-based indexing; column 0 is the virtual source of each augmentation.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv = vec![f64::INFINITY; m + 1];
    let mut used = vec![false; m + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        minv.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = c[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == 0 {
                return Err(Error::Numerical("assignment search found no augmenting path".into()));
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut mapping = vec![0usize; n];
    for j in 1..=m {
        if owner[j] != 0 {
            mapping[owner[j] - 1] = j - 1;
        }
    }
    let objective = mapping.iter().enumerate().map(|(i, &j)| c[(i, j)]).sum();
    Ok(AssignmentResult { mapping, objective })
}

/// Maximum-score injective assignment, solved as a minimum-cost problem on
/// negated scores. The objective is the (unnormalized) total score.
pub fn solve_rectangular_max_score(scores: &Matrix) -> Result<AssignmentResult> {
    let mut r = solve_rectangular_min_cost(&scores.scale(-1.0))?;
    r.objective = r.mapping.iter().enumerate().map(|(i, &j)| scores[(i, j)]).sum();
    Ok(r)
}

/// Optimal one-to-one matching of `x`'s units onto `y`'s, with the
/// resulting distance `√(Σᵢ ‖xᵢ − y_σ(i)‖²)`.
pub fn one_to_one_matching(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<(f64, AssignmentResult)> {
    if x.units() != y.units() {
        return Err(Error::Dimension(format!(
            "one-to-one matching needs equal unit counts ({} vs {}); use the soft matching distance for unequal sizes",
            x.units(),
            y.units()
        )));
    }
    let costs = squared_distance_costs(x, y)?;
    let result = solve_lap_min_cost(costs.matrix())?;
    Ok((result.objective.max(0.0).sqrt(), result))
}

pub fn one_to_one_matching_distance(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<f64> {
    Ok(one_to_one_matching(x, y)?.0)
}

/// Each row matched to its best-correlated column (ties to the lowest
/// index); objective is the mean of those maxima. Not symmetric.
pub fn semi_matching(r: &CorrelationMatrix) -> AssignmentResult {
    let r = r.matrix();
    let mapping: Vec<usize> = (0..r.rows())
        .map(|i| {
            let row = r.row(i);
            (0..row.len()).fold(0, |best, j| if row[j] > row[best] { j } else { best })
        })
        .collect();
    let objective = if mapping.is_empty() {
        0.0
    } else {
        mapping.iter().enumerate().map(|(i, &j)| r[(i, j)]).sum::<f64>() / mapping.len() as f64
    };
    AssignmentResult { mapping, objective }
}

pub fn semi_matching_score(r: &CorrelationMatrix) -> f64 {
    semi_matching(r).objective
}

/// Best injective matching from the smaller network (rows) into the larger
/// (columns); objective is the mean matched correlation.
pub fn rectangular_matching(r: &CorrelationMatrix) -> Result<AssignmentResult> {
    let m = r.matrix();
    if m.rows() > m.cols() {
        return Err(Error::Infeasible(format!(
            "rectangular matching needs N_y >= N_x, got N_x = {} > N_y = {}",
            m.rows(),
            m.cols()
        )));
    }
    let mut res = solve_rectangular_max_score(m)?;
    if !res.mapping.is_empty() {
        res.objective /= res.mapping.len() as f64;
    }
    Ok(res)
}

pub fn rectangular_matching_score(r: &CorrelationMatrix) -> Result<f64> {
    Ok(rectangular_matching(r)?.objective)
}
