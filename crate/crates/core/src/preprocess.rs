//! Normalization conventions for activation matrices and the pairwise
//! cost and correlation matrices built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Normalization applied to an activation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preprocessing {
    Raw,
    /// Columns mean-centered, whole matrix scaled to unit Frobenius norm.
    CenteredFrobUnit,
    /// Columns mean-centered and scaled to unit Euclidean norm, so inner
    /// products between columns are Pearson correlations.
    CenteredUnitColumns,
    /// Columns scaled to unit norm without centering.
    UnitColumnsUncentered,
}

impl Preprocessing {
    pub fn has_unit_columns(self) -> bool {
        matches!(self, Preprocessing::CenteredUnitColumns | Preprocessing::UnitColumnsUncentered)
    }

    pub fn name(self) -> &'static str {
        match self {
            Preprocessing::Raw => "raw",
            Preprocessing::CenteredFrobUnit => "centered_frob_unit",
            Preprocessing::CenteredUnitColumns => "centered_unit_columns",
            Preprocessing::UnitColumnsUncentered => "unit_columns_uncentered",
        }
    }
}

/// Responses of `N` units (columns) to `M` stimuli (rows), tagged with the
/// normalization it carries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationMatrix {
    data: Matrix,
    preprocessing: Preprocessing,
}

impl ActivationMatrix {
    pub fn raw(data: Matrix) -> Self {
        Self { data, preprocessing: Preprocessing::Raw }
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn preprocessing(&self) -> Preprocessing {
        self.preprocessing
    }

    pub fn stimuli(&self) -> usize {
        self.data.rows()
    }

    pub fn units(&self) -> usize {
        self.data.cols()
    }

    /// Same data with columns reordered (`out[:, k] = self[:, order[k]]`).
    /// Column reordering preserves every normalization, so the tag is kept.
    pub fn permute_columns(&self, order: &[usize]) -> Self {
        Self { data: self.data.select_columns(order), preprocessing: self.preprocessing }
    }

    /// Right-multiplies the data by `q` and drops the tag back to raw.
    pub fn transform(&self, q: &Matrix) -> Result<Self> {
        Ok(Self::raw(self.data.matmul(q)?))
    }

    pub fn into_data(self) -> Matrix {
        self.data
    }

    /// Checks the invariant of the current tag.
    pub fn validate(&self) -> Result<()> {
        let m = self.data.rows() as f64;
        let tol = 1e-10;
        let centered = matches!(
            self.preprocessing,
            Preprocessing::CenteredFrobUnit | Preprocessing::CenteredUnitColumns
        );
        for (j, col) in self.data.columns().iter().enumerate() {
            if centered {
                let sum: f64 = col.iter().sum();
                if sum.abs() > tol * m.max(1.0) {
                    return Err(Error::Preprocessing(format!("column {j} sums to {sum:e}")));
                }
            }
            if self.preprocessing.has_unit_columns() {
                let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > tol {
                    return Err(Error::Preprocessing(format!("column {j} has norm {norm}")));
                }
            }
        }
        if self.preprocessing == Preprocessing::CenteredFrobUnit
            && (self.data.frobenius_norm() - 1.0).abs() > tol
        {
            return Err(Error::Preprocessing("Frobenius norm is not 1".into()));
        }
        Ok(())
    }
}

/// Applies `mode` to the data of `x`, treating the entries as raw responses.
/// Applying the same mode twice is a no-op up to round-off.
pub fn preprocess(x: &ActivationMatrix, mode: Preprocessing) -> Result<ActivationMatrix> {
    let (m, n) = x.data.shape();
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("activation matrix is empty ({m}x{n})")));
    }
    let mut cols = x.data.columns();
    let centered = matches!(mode, Preprocessing::CenteredFrobUnit | Preprocessing::CenteredUnitColumns);
    let scales: Vec<f64> = cols.iter().map(|c| c.iter().fold(0.0f64, |a, v| a.max(v.abs()))).collect();
    if centered {
        for col in cols.iter_mut() {
            let mean = col.iter().sum::<f64>() / m as f64;
            col.iter_mut().for_each(|v| *v -= mean);
        }
    }
    match mode {
        Preprocessing::Raw => {}
        Preprocessing::CenteredFrobUnit => {
            let norm = cols.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            let scale = scales.iter().cloned().fold(0.0, f64::max);
            if norm <= f64::EPSILON * scale * (m as f64).sqrt() || norm == 0.0 {
                return Err(Error::Preprocessing(
                    "every column is constant; Frobenius normalization is undefined".into(),
                ));
            }
            cols.iter_mut().flatten().for_each(|v| *v /= norm);
        }
        Preprocessing::CenteredUnitColumns | Preprocessing::UnitColumnsUncentered => {
            for (j, col) in cols.iter_mut().enumerate() {
                let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 || norm <= 8.0 * f64::EPSILON * scales[j] * (m as f64).sqrt() {
                    return Err(Error::DegenerateColumn { column: j });
                }
                col.iter_mut().for_each(|v| *v /= norm);
            }
        }
    }
    let data = Matrix::from_fn(m, n, |i, j| cols[j][i]);
    Ok(ActivationMatrix { data, preprocessing: mode })
}

/// Squared Euclidean distances between columns of `x` and columns of `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrix(Matrix);

impl CostMatrix {
    pub fn new(c: Matrix) -> Result<Self> {
        if let Some(k) = c.as_slice().iter().position(|&v| v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cost entry ({}, {}) is negative",
                k / c.cols(),
                k % c.cols()
            )));
        }
        Ok(Self(c))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Inner products `xᵢᵀyⱼ` between unit-norm columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix(Matrix);

impl CorrelationMatrix {
    pub const BOUND_SLACK: f64 = 1e-10;

    pub fn new(r: Matrix) -> Result<Self> {
        if r.max_abs() > 1.0 + Self::BOUND_SLACK {
            return Err(Error::InvalidArgument(format!(
                "correlation of magnitude {} exceeds 1",
                r.max_abs()
            )));
        }
        Ok(Self(r))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

fn check_comparable(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<()> {
    if x.stimuli() != y.stimuli() {
        return Err(Error::Dimension(format!(
            "stimulus counts differ: {} vs {} (rows must be stimuli)",
            x.stimuli(),
            y.stimuli()
        )));
    }
    if x.preprocessing != y.preprocessing {
        return Err(Error::Preprocessing(format!(
            "inputs carry different preprocessing ({} vs {})",
            x.preprocessing.name(),
            y.preprocessing.name()
        )));
    }
    Ok(())
}

/// `c[i][j] = ‖xᵢ − yⱼ‖²`, accumulated as a sum of squared differences.
pub fn squared_distance_costs(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<CostMatrix> {
    check_comparable(x, y)?;
    let xc = x.data.columns();
    let yc = y.data.columns();
    let c = Matrix::from_fn(xc.len(), yc.len(), |i, j| {
        xc[i].iter().zip(&yc[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().max(0.0)
    });
    Ok(CostMatrix(c))
}

/// `r = xᵀy` for inputs with unit-norm columns.
pub fn correlations(x: &ActivationMatrix, y: &ActivationMatrix) -> Result<CorrelationMatrix> {
    check_comparable(x, y)?;
    if !x.preprocessing.has_unit_columns() {
        return Err(Error::Preprocessing(format!(
            "correlations need unit-norm columns, got {}",
            x.preprocessing.name()
        )));
    }
    Ok(CorrelationMatrix(x.data.t_matmul(&y.data)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn raw(rows: &[&[f64]]) -> ActivationMatrix {
        ActivationMatrix::raw(Matrix::from_rows(rows).unwrap())
    }

    #[test]
    fn frob_mode_allows_zero_column() {
        let x = raw(&[&[1.0, 0.0], &[3.0, 0.0]]);
        let p = preprocess(&x, Preprocessing::CenteredFrobUnit).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = Matrix::from_rows(&[[-h, 0.0], [h, 0.0]]).unwrap();
        assert!(p.data().max_abs_diff(&expect) < 1e-15);
        p.validate().unwrap();
    }

    #[test]
    fn unit_column_mode_rejects_constant_column() {
        let x = raw(&[&[1.0, 5.0], &[3.0, 5.0]]);
        let err = preprocess(&x, Preprocessing::CenteredUnitColumns).unwrap_err();
        assert_eq!(err, Error::DegenerateColumn { column: 1 });
        // Uncentered normalization only needs a nonzero column.
        preprocess(&x, Preprocessing::UnitColumnsUncentered).unwrap();
        let z = raw(&[&[1.0, 0.0], &[3.0, 0.0]]);
        assert_eq!(
            preprocess(&z, Preprocessing::UnitColumnsUncentered).unwrap_err(),
            Error::DegenerateColumn { column: 1 }
        );
    }

    #[test]
    fn idempotent() {
        let x = ActivationMatrix::raw(rng::standard_normal_matrix(10, 4, &mut rng::seeded(1)));
        for mode in [
            Preprocessing::CenteredFrobUnit,
            Preprocessing::CenteredUnitColumns,
            Preprocessing::UnitColumnsUncentered,
        ] {
            let once = preprocess(&x, mode).unwrap();
            once.validate().unwrap();
            let twice = preprocess(&once, mode).unwrap();
            assert!(once.data().max_abs_diff(twice.data()) < 1e-12);
        }
    }

    #[test]
    fn centered_unit_columns_by_recomputation() {
        let x = ActivationMatrix::raw(rng::uniform_matrix(10, 4, -2.0, 5.0, &mut rng::seeded(2)));
        let p = preprocess(&x, Preprocessing::CenteredUnitColumns).unwrap();
        for col in p.data().columns() {
            assert!(col.iter().sum::<f64>().abs() < 1e-12);
            assert!((col.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cost_and_correlation_identities() {
        let mut g = rng::seeded(3);
        let x = preprocess(&ActivationMatrix::raw(rng::standard_normal_matrix(8, 3, &mut g)), Preprocessing::CenteredUnitColumns).unwrap();
        let y = preprocess(&ActivationMatrix::raw(rng::standard_normal_matrix(8, 5, &mut g)), Preprocessing::CenteredUnitColumns).unwrap();
        let c = squared_distance_costs(&x, &y).unwrap();
        let r = correlations(&x, &y).unwrap();
        for i in 0..3 {
            for j in 0..5 {
                assert!((c.matrix()[(i, j)] - (2.0 - 2.0 * r.matrix()[(i, j)])).abs() < 1e-10);
            }
        }
        let self_c = squared_distance_costs(&x, &x).unwrap();
        for i in 0..3 {
            assert_eq!(self_c.matrix()[(i, i)], 0.0);
        }
        let self_r = correlations(&x, &x).unwrap();
        for i in 0..3 {
            assert!((self_r.matrix()[(i, i)] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_columns_correlate_zero() {
        let x = preprocess(&raw(&[&[1.0], &[0.0]]), Preprocessing::UnitColumnsUncentered).unwrap();
        let y = preprocess(&raw(&[&[0.0], &[2.0]]), Preprocessing::UnitColumnsUncentered).unwrap();
        assert_eq!(correlations(&x, &y).unwrap().matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn contract_errors() {
        let x = raw(&[&[1.0, 2.0], &[3.0, 4.0], &[0.0, 1.0]]);
        let y = raw(&[&[1.0, 2.0, 4.0], &[3.0, 4.0, 0.0]]);
        assert!(matches!(squared_distance_costs(&x, &y), Err(Error::Dimension(_))));
        let xf = preprocess(&x, Preprocessing::CenteredFrobUnit).unwrap();
        let xu = preprocess(&x, Preprocessing::CenteredUnitColumns).unwrap();
        assert!(matches!(squared_distance_costs(&xf, &xu), Err(Error::Preprocessing(_))));
        assert!(matches!(correlations(&xf, &xf), Err(Error::Preprocessing(_))));
    }
}
