//! Exact optimal transport between uniform distributions on two sets of
//! units: the soft matching distance and soft matching correlation.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::preprocess::{correlations, squared_distance_costs, ActivationMatrix};
use simplex::NetworkSimplex;

pub use simplex::{BLAND_PIVOTS_PER_NODE, PRICING_TOL};

/// Tolerance on row and column sums of a transport plan.
pub const MARGINAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Minimize,
    Maximize,
}

/// A nonnegative `N_x × N_y` matrix with rows summing to `1/N_x` and
/// columns summing to `1/N_y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan(Matrix);

impl TransportPlan {
    /// Wraps `p` after checking nonnegativity and uniform marginals.
    pub fn new(p: Matrix) -> Result<Self> {
        let (nx, ny) = p.shape();
        if nx == 0 || ny == 0 {
            return Err(Error::Dimension("transport plan must be nonempty".into()));
        }
        if p.as_slice().iter().any(|&v| v < -1e-12) {
            return Err(Error::InvalidArgument("transport plan has negative mass".into()));
        }
        let plan = Self(p.map(|v| if v < 0.0 { 0.0 } else { v }));
        let row_err = plan.row_sums().iter().map(|s| (s - 1.0 / nx as f64).abs()).fold(0.0, f64::max);
        let col_err = plan.column_sums().iter().map(|s| (s - 1.0 / ny as f64).abs()).fold(0.0, f64::max);
        if row_err.max(col_err) > MARGINAL_TOL {
            return Err(Error::InvalidArgument(format!(
                "plan marginals off by {:.3e}",
                row_err.max(col_err)
            )));
        }
        Ok(plan)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.0.rows()).map(|i| self.0.row(i).iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.0.cols()).map(|j| (0..self.0.rows()).map(|i| self.0[(i, j)]).sum()).collect()
    }

    /// Number of strictly positive entries.
    pub fn support_size(&self) -> usize {
        self.0.as_slice().iter().filter(|&&v| v > 0.0).count()
    }

    /// `Σᵢⱼ pᵢⱼ wᵢⱼ`.
    pub fn inner(&self, w: &Matrix) -> Result<f64> {
        if w.shape() != self.0.shape() {
            return Err(Error::Dimension(format!(
                "weights {:?} do not match plan {:?}",
                w.shape(),
                self.0.shape()
            )));
        }
        Ok(self.0.as_slice().iter().zip(w.as_slice()).map(|(p, c)| p * c).sum())
    }

    /// For a square plan, the permutation `σ` with `N · p ≈ Iσ` when every
    /// entry of `N · p` lies within `tol` of 0 or 1.
    pub fn as_permutation(&self, tol: f64) -> Option<Vec<usize>> {
        let n = self.0.rows();
        if n != self.0.cols() {
            return None;
        }
        let mut sigma = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let v = self.0[(i, j)] * n as f64;
                if (v - 1.0).abs() <= tol {
                    if sigma[i] != usize::MAX {
                        return None;
                    }
                    sigma[i] = j;
                } else if v.abs() > tol {
                    return None;
                }
            }
        }
        sigma.iter().all(|&s| s != usize::MAX).then_some(sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// Optimal, but the basis has fewer than `N_x + N_y − 1` positive entries.
    DegenerateOptimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportSolution {
    pub plan: TransportPlan,
    /// `Σ pᵢⱼ cᵢⱼ` in the units of the input matrix (scores stay scores).
    pub objective: f64,
    pub iterations: usize,
    pub degenerate_pivots: usize,
    pub bland_fallback: bool,
    pub status: SolveStatus,
    /// Largest negative reduced cost at termination (0 for a certified optimum).
    pub dual_violation: f64,
}

/// Exact optimum of `Σ pᵢⱼ cᵢⱼ` over the transportation polytope with
/// uniform marginals, minimized or maximized.
///
/// Maximization runs the minimizer on negated weights.
pub fn solve_uniform_transport(c: &Matrix, objective: Objective) -> Result<TransportSolution> {
    let (nx, ny) = c.shape();
    if nx == 0 || ny == 0 {
        return Err(Error::Dimension(format!("cost matrix is empty ({nx}x{ny})")));
    }
    if !c.is_finite() {
        return Err(Error::Numerical("transport costs must be finite".into()));
    }
    let negated;
    let work = match objective {
        Objective::Minimize => c,
        Objective::Maximize => {
            negated = c.scale(-1.0);
            &negated
        }
    };
    let arcs = nx * ny + nx + ny;
    let max_pivots = 200 * arcs + 10_000;
    let out = NetworkSimplex::new(work).run(max_pivots)?;

    let total = (nx * ny) as f64;
    let plan = Matrix::from_fn(nx, ny, |i, j| out.flow[i * ny + j] as f64 / total);
    let support = out.flow.iter().filter(|&&f| f > 0).count();
    let plan = TransportPlan(plan);
    let value = plan.inner(c)?;
    Ok(TransportSolution {
        plan,
        objective: value,
        iterations: out.pivots,
        degenerate_pivots: out.degenerate_pivots,
        bland_fallback: out.switched_to_bland,
        status: if support + 1 < nx + ny { SolveStatus::DegenerateOptimal } else { SolveStatus::Optimal },
        dual_violation: out.dual_violation,
    })
}

/// Soft matching distance with its optimal plan: the 2-Wasserstein distance
/// between uniform point masses on the columns of `x` and of `y`.
pub fn soft_matching(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<(f64, TransportSolution)> {
    let costs = squared_distance_costs(x, y)?;
    let sol = solve_uniform_transport(costs.matrix(), Objective::Minimize)?;
    Ok((sol.objective.max(0.0).sqrt(), sol))
}

pub fn soft_matching_distance(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<f64> {
    Ok(soft_matching(x, y)?.0)
}

/// Soft matching correlation with its optimal plan. Inputs must have
/// unit-norm columns; with centered columns the score is a
/// transport-weighted mean Pearson correlation.
pub fn soft_matching_correlation_plan(
    x: &ActivationMatrix,
    y: &ActivationMatrix,
) -> Result<(f64, TransportSolution)> {
    let r = correlations(x, y)?;
    let sol = solve_uniform_transport(r.matrix(), Objective::Maximize)?;
    Ok((sol.objective, sol))
}

pub fn soft_matching_correlation(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<f64> {
    Ok(soft_matching_correlation_plan(x, y)?.0)
}
