//! Procrustes distance, a uniform metric dispatcher with reports, and a
//! harness that checks the metric axioms empirically.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::{one_to_one_matching, rectangular_matching, semi_matching, AssignmentResult};
use crate::error::{Error, Result};
use crate::linalg::{sample_haar_special_orthogonal_with, svd, Matrix, OrthogonalMatrix};
use crate::preprocess::{correlations, preprocess, ActivationMatrix, Preprocessing};
use crate::rng::{self, SeededRng};
use crate::transport::{soft_matching, soft_matching_correlation_plan, SolveStatus, TransportSolution};

/// Relative size of a negative Procrustes radicand still attributed to
/// round-off and clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-9;

fn require_frob(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<()> {
    for (name, a) in [("x", x), ("y", y)] {
        if a.preprocessing() != Preprocessing::CenteredFrobUnit {
            return Err(Error::Preprocessing(format!(
                "procrustes distance needs centered, Frobenius-normalized inputs; {name} is {}",
                a.preprocessing().name()
            )));
        }
    }
    if x.stimuli() != y.stimuli() {
        return Err(Error::Dimension(format!(
            "stimulus counts differ: {} vs {}",
            x.stimuli(),
            y.stimuli()
        )));
    }
    Ok(())
}

/// `√(tr XᵀX + tr YᵀY − 2‖XᵀY‖_*)`; valid for unequal unit counts.
///
/// Evaluated as the residual `‖X − Y Q‖_F` of the optimal alignment after
/// zero-padding the narrower input, which stays accurate near zero where
/// the trace form cancels. The trace form is still checked for a negative
/// radicand beyond round-off.
pub fn procrustes_distance(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<f64> {
    require_frob(x, y)?;
    let n = x.units().max(y.units());
    let pad = |a: &Matrix| Matrix::from_fn(a.rows(), n, |i, j| if j < a.cols() { a[(i, j)] } else { 0.0 });
    let (xd, yd) = (pad(x.data()), pad(y.data()));
    let tx = xd.frobenius_norm().powi(2);
    let ty = yd.frobenius_norm().powi(2);
    let s = svd(&xd.t_matmul(&yd)?)?;
    let radicand = tx + ty - 2.0 * s.s.iter().sum::<f64>();
    if radicand < -RADICAND_CLAMP * (tx + ty).max(1.0) {
        return Err(Error::Numerical(format!("negative procrustes radicand {radicand:e}")));
    }
    let q = s.vt.transpose().matmul(&s.u.transpose())?;
    Ok(xd.sub(&yd.matmul(&q)?)?.frobenius_norm())
}

/// Optimal orthogonal alignment `Q = V Uᵀ` (from `XᵀY = U S Vᵀ`) and the
/// residual `‖X − Y Q‖_F`.
pub fn procrustes_alignment(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<(OrthogonalMatrix, f64)> {
    if x.units() != y.units() || x.stimuli() != y.stimuli() {
        return Err(Error::Dimension(format!(
            "alignment needs equal shapes, got {}x{} and {}x{}",
            x.stimuli(),
            x.units(),
            y.stimuli(),
            y.units()
        )));
    }
    if x.preprocessing() != y.preprocessing() {
        return Err(Error::Preprocessing("inputs carry different preprocessing".into()));
    }
    let s = svd(&x.data().t_matmul(y.data())?)?;
    let q = OrthogonalMatrix::new(s.vt.transpose().matmul(&s.u.transpose())?)?;
    let residual = x.data().sub(&y.data().matmul(q.matrix())?)?.frobenius_norm();
    Ok((q, residual))
}

/// Every (dis)similarity measure the crate computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    SoftMatchingDistance,
    SoftMatchingCorrelation,
    OneToOneDistance,
    SemiMatching,
    RectangularMatching,
    Procrustes,
}

impl MetricKind {
    pub const ALL: [MetricKind; 6] = [
        MetricKind::SoftMatchingDistance,
        MetricKind::SoftMatchingCorrelation,
        MetricKind::OneToOneDistance,
        MetricKind::SemiMatching,
        MetricKind::RectangularMatching,
        MetricKind::Procrustes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::SoftMatchingDistance => "soft_matching_distance",
            MetricKind::SoftMatchingCorrelation => "soft_matching_correlation",
            MetricKind::OneToOneDistance => "one_to_one_matching_distance",
            MetricKind::SemiMatching => "semi_matching_score",
            MetricKind::RectangularMatching => "rectangular_matching_score",
            MetricKind::Procrustes => "procrustes_distance",
        }
    }

    /// Short selector used on the command line.
    pub fn flag(self) -> &'static str {
        match self {
            MetricKind::SoftMatchingDistance => "soft",
            MetricKind::SoftMatchingCorrelation => "soft-corr",
            MetricKind::OneToOneDistance => "one2one",
            MetricKind::SemiMatching => "semi",
            MetricKind::RectangularMatching => "rect",
            MetricKind::Procrustes => "procrustes",
        }
    }

    pub fn from_flag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.flag() == s || m.name() == s)
    }

    pub fn is_distance(self) -> bool {
        matches!(
            self,
            MetricKind::SoftMatchingDistance | MetricKind::OneToOneDistance | MetricKind::Procrustes
        )
    }

    /// Normalization applied when the caller does not choose one.
    pub fn default_preprocessing(self) -> Preprocessing {
        if self.is_distance() {
            Preprocessing::CenteredFrobUnit
        } else {
            Preprocessing::CenteredUnitColumns
        }
    }

    /// Whether `mode` satisfies the metric's input contract.
    pub fn accepts(self, mode: Preprocessing) -> bool {
        match self {
            MetricKind::Procrustes => mode == Preprocessing::CenteredFrobUnit,
            MetricKind::SoftMatchingDistance | MetricKind::OneToOneDistance => true,
            _ => mode.has_unit_columns(),
        }
    }
}

/// Optimizer that attains a reported value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `mapping[i]` is the unit of `y` matched to unit `i` of `x`.
    Matching { mapping: Vec<usize> },
    Plan { plan: Matrix },
    Orthogonal { q: Matrix, determinant: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub degenerate_pivots: usize,
    pub bland_fallback: bool,
    pub status: SolveStatus,
    pub dual_violation: f64,
    pub support_size: usize,
}

impl From<&TransportSolution> for SolverDiagnostics {
    fn from(s: &TransportSolution) -> Self {
        Self {
            iterations: s.iterations,
            degenerate_pivots: s.degenerate_pivots,
            bland_fallback: s.bland_fallback,
            status: s.status,
            dual_violation: s.dual_violation,
            support_size: s.plan.support_size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub preprocessing: Preprocessing,
    /// `(M, N_x, N_y)`.
    pub sizes: (usize, usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverDiagnostics>,
}

/// Evaluates `metric` on already preprocessed inputs and packages the value
/// with its optimizer.
pub fn evaluate(metric: MetricKind, x: &ActivationMatrix, y: &ActivationMatrix) -> Result<MetricReport> {
    let sizes = (x.stimuli(), x.units(), y.units());
    let mut solver = None;
    let (value, witness) = match metric {
        MetricKind::SoftMatchingDistance => {
            let (d, sol) = soft_matching(x, y)?;
            solver = Some(SolverDiagnostics::from(&sol));
            (d, Some(Witness::Plan { plan: sol.plan.matrix().clone() }))
        }
        MetricKind::SoftMatchingCorrelation => {
            let (s, sol) = soft_matching_correlation_plan(x, y)?;
            solver = Some(SolverDiagnostics::from(&sol));
            (s, Some(Witness::Plan { plan: sol.plan.matrix().clone() }))
        }
        MetricKind::OneToOneDistance => {
            let (d, AssignmentResult { mapping, .. }) = one_to_one_matching(x, y)?;
            (d, Some(Witness::Matching { mapping }))
        }
        MetricKind::SemiMatching => {
            let r = semi_matching(&correlations(x, y)?);
            (r.objective, Some(Witness::Matching { mapping: r.mapping }))
        }
        MetricKind::RectangularMatching => {
            let r = rectangular_matching(&correlations(x, y)?)?;
            (r.objective, Some(Witness::Matching { mapping: r.mapping }))
        }
        MetricKind::Procrustes => {
            let d = procrustes_distance(x, y)?;
            let witness = if x.units() == y.units() {
                let (q, _) = procrustes_alignment(x, y)?;
                Some(Witness::Orthogonal { determinant: q.determinant(), q: q.into_matrix() })
            } else {
                None
            };
            (d, witness)
        }
    };
    Ok(MetricReport {
        metric: metric.name().to_string(),
        value,
        witness,
        preprocessing: x.preprocessing(),
        sizes,
        solver,
    })
}

/// Scalar value of `metric` without witnesses.
pub fn metric_value(metric: MetricKind, x: &ActivationMatrix, y: &ActivationMatrix) -> Result<f64> {
    match metric {
        MetricKind::SoftMatchingDistance => Ok(soft_matching(x, y)?.0),
        MetricKind::SoftMatchingCorrelation => Ok(soft_matching_correlation_plan(x, y)?.0),
        MetricKind::OneToOneDistance => Ok(one_to_one_matching(x, y)?.0),
        MetricKind::SemiMatching => Ok(semi_matching(&correlations(x, y)?).objective),
        MetricKind::RectangularMatching => Ok(rectangular_matching(&correlations(x, y)?)?.objective),
        MetricKind::Procrustes => procrustes_distance(x, y),
    }
}

/// Transformations a metric is supposed to ignore.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuisanceClass {
    Permutation,
    Orthogonal,
}

impl NuisanceClass {
    /// Applies a random member of the class to the columns of `x`, then
    /// restores `x`'s normalization tag.
    pub fn apply_random(self, x: &ActivationMatrix, rng: &mut SeededRng) -> Result<ActivationMatrix> {
        match self {
            NuisanceClass::Permutation => Ok(x.permute_columns(&rng::permutation(x.units(), rng))),
            NuisanceClass::Orthogonal => {
                let q = sample_haar_special_orthogonal_with(x.units(), rng)?;
                let moved = x.transform(q.matrix())?;
                if x.preprocessing() == Preprocessing::Raw {
                    Ok(moved)
                } else {
                    preprocess(&moved, x.preprocessing())
                }
            }
        }
    }
}

/// Worst-case departures from the metric axioms over a set of triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub triples: usize,
    /// max |d(a,b) − d(b,a)|.
    pub max_symmetry_violation: f64,
    /// max over orderings of d(a,b) − d(a,c) − d(c,b), clamped at 0.
    pub max_triangle_violation: f64,
    /// max d(a, f(a)) over sampled nuisance transforms f (including identity).
    pub max_identity_value: f64,
    /// Count of triangle checks exceeding `triangle_slack`.
    pub triangle_violations: usize,
    pub triangle_slack: f64,
    pub nuisance: NuisanceClass,
}

impl AxiomReport {
    pub fn passes(&self, symmetry_tol: f64, identity_tol: f64) -> bool {
        self.max_symmetry_violation <= symmetry_tol
            && self.triangle_violations == 0
            && self.max_identity_value <= identity_tol
    }
}

/// Evaluates symmetry, the triangle inequality, and `d(a, f(a)) ≈ 0` for
/// random nuisance transforms `f`, over every triple. Violations are
/// measured and reported; only errors from the metric itself propagate.
pub fn check_metric_axioms<F>(
    metric: F,
    nuisance: NuisanceClass,
    triples: &[(ActivationMatrix, ActivationMatrix, ActivationMatrix)],
    triangle_slack: f64,
    seed: u64,
) -> Result<AxiomReport>
where
    F: Fn(&ActivationMatrix, &ActivationMatrix) -> Result<f64> + Sync,
{
    if let Some((a, _, _)) = triples.first() {
        let m = a.stimuli();
        if triples.iter().any(|(a, b, c)| a.stimuli() != m || b.stimuli() != m || c.stimuli() != m) {
            return Err(Error::Dimension("all triples must share a stimulus count".into()));
        }
    }
    struct Partial {
        sym: f64,
        tri: f64,
        tri_count: usize,
        ident: f64,
    }
    let partials: Vec<Partial> = triples
        .par_iter()
        .enumerate()
        .map(|(k, (a, b, c))| -> Result<Partial> {
            let pts = [a, b, c];
            let mut d = [[0.0; 3]; 3];
            let mut sym: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        d[i][j] = metric(pts[i], pts[j])?;
                    }
                }
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    sym = sym.max((d[i][j] - d[j][i]).abs());
                }
            }
            let mut tri: f64 = 0.0;
            let mut tri_count = 0;
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let l = 3 - i - j;
                    let excess = d[i][j] - d[i][l] - d[l][j];
                    tri = tri.max(excess);
                    if excess > triangle_slack {
                        tri_count += 1;
                    }
                }
            }
            let mut g = rng::seeded(seed.wrapping_add(k as u64));
            let mut ident: f64 = metric(a, a)?.abs();
            ident = ident.max(metric(a, &nuisance.apply_random(a, &mut g)?)?.abs());
            Ok(Partial { sym, tri, tri_count, ident })
        })
        .collect::<Result<_>>()?;

    Ok(AxiomReport {
        triples: triples.len(),
        max_symmetry_violation: partials.iter().map(|p| p.sym).fold(0.0, f64::max),
        max_triangle_violation: partials.iter().map(|p| p.tri).fold(0.0, f64::max),
        max_identity_value: partials.iter().map(|p| p.ident).fold(0.0, f64::max),
        triangle_violations: partials.iter().map(|p| p.tri_count).sum(),
        triangle_slack,
        nuisance,
    })
}
