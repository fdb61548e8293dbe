//! Linear predictivity: how well ridge regression on one representation
//! predicts each column of another on held-out stimuli.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::preprocess::ActivationMatrix;
use crate::rng;

/// Reciprocal-condition floor below which the normal equations are refused.
pub const MIN_RCOND: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictivityConfig {
    pub train_fraction: f64,
    pub validation_fraction: f64,
    pub test_fraction: f64,
    /// Candidate ridge penalties, tried in increasing order.
    pub penalties: Vec<f64>,
    pub seed: u64,
}

/// Eight penalties spaced geometrically from 1e-4 to 1e4 inclusive.
pub fn ridge_grid() -> Vec<f64> {
    (0..8).map(|k| 10f64.powf(-4.0 + 8.0 * k as f64 / 7.0)).collect()
}

impl PredictivityConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            train_fraction: 0.70,
            validation_fraction: 0.10,
            test_fraction: 0.20,
            penalties: ridge_grid(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fr = [self.train_fraction, self.validation_fraction, self.test_fraction];
        if fr.iter().any(|&f| !(f > 0.0)) || (fr.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("split fractions {fr:?} must be positive and sum to 1")));
        }
        if self.penalties.is_empty() || self.penalties.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument("penalties must be positive and finite".into()));
        }
        Ok(())
    }
}

impl Default for PredictivityConfig {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// Row indices of each split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splits {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded shuffle of `0..rows` cut into train, validation and test parts.
pub fn split_rows(rows: usize, cfg: &PredictivityConfig) -> Result<Splits> {
    cfg.validate()?;
    if rows < 10 {
        return Err(Error::InvalidArgument(format!("need at least 10 stimuli, got {rows}")));
    }
    let order = rng::permutation(rows, &mut rng::seeded(cfg.seed));
    let n_train = (cfg.train_fraction * rows as f64).round() as usize;
    let n_val = ((cfg.validation_fraction * rows as f64).round() as usize).max(1);
    let n_train = n_train.min(rows - n_val - 1).max(1);
    Ok(Splits {
        train: order[..n_train].to_vec(),
        validation: order[n_train..n_train + n_val].to_vec(),
        test: order[n_train + n_val..].to_vec(),
    })
}

/// Multi-output ridge regression with an unpenalized intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    /// `p × q` coefficients on centered features.
    pub weights: Matrix,
    /// Length `q`.
    pub intercept: Vec<f64>,
    pub penalty: f64,
}

fn column_means(a: &Matrix) -> Vec<f64> {
    let n = a.rows().max(1) as f64;
    (0..a.cols()).map(|j| (0..a.rows()).map(|i| a[(i, j)]).sum::<f64>() / n).collect()
}

fn center(a: &Matrix, means: &[f64]) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] - means[j])
}

/// Solves `(AᵀA + λI) W = AᵀB` on column-centered `A` and `B`.
pub fn fit_ridge(features: &Matrix, targets: &Matrix, penalty: f64) -> Result<RidgeModel> {
    if features.rows() != targets.rows() {
        return Err(Error::Dimension(format!(
            "{} feature rows vs {} target rows",
            features.rows(),
            targets.rows()
        )));
    }
    let fm = column_means(features);
    let tm = column_means(targets);
    let a = center(features, &fm);
    let b = center(targets, &tm);
    let mut gram = a.t_matmul(&a)?;
    for i in 0..gram.rows() {
        gram[(i, i)] += penalty;
    }
    let weights = Cholesky::new(&gram, MIN_RCOND)?.solve(&a.t_matmul(&b)?)?;
    let intercept = (0..targets.cols())
        .map(|j| tm[j] - (0..fm.len()).map(|k| fm[k] * weights[(k, j)]).sum::<f64>())
        .collect();
    Ok(RidgeModel { weights, intercept, penalty })
}

impl RidgeModel {
    pub fn predict(&self, features: &Matrix) -> Result<Matrix> {
        let mut out = features.matmul(&self.weights)?;
        for i in 0..out.rows() {
            for j in 0..out.cols() {
                out[(i, j)] += self.intercept[j];
            }
        }
        Ok(out)
    }
}

/// Pearson correlation; 0 when either input is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

fn columnwise_pearson(pred: &Matrix, truth: &Matrix) -> Vec<f64> {
    (0..truth.cols()).map(|j| pearson(&pred.column(j), &truth.column(j))).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictivityReport {
    pub penalties: Vec<f64>,
    /// Mean validation R per penalty; `None` where the fit was refused.
    pub validation_r: Vec<Option<f64>>,
    pub chosen_penalty: f64,
    /// Test-set Pearson R for each target column.
    pub test_r: Vec<f64>,
    pub mean_test_r: f64,
    pub n_train: usize,
    pub n_validation: usize,
    pub n_test: usize,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub model: RidgeModel,
    #[serde(skip)]
    pub splits: Splits,
}

/// Fits ridge maps from `model` to `target` on the training rows, picks the
/// penalty with the best mean validation R, and scores it on the test rows.
pub fn linear_predictivity(
    model: &ActivationMatrix,
    target: &ActivationMatrix,
    cfg: &PredictivityConfig,
) -> Result<PredictivityReport> {
    if model.stimuli() != target.stimuli() {
        return Err(Error::Dimension(format!(
            "stimulus counts differ: {} vs {}",
            model.stimuli(),
            target.stimuli()
        )));
    }
    let splits = split_rows(model.stimuli(), cfg)?;
    let (xm, ym) = (model.data(), target.data());
    let (x_train, y_train) = (xm.select_rows(&splits.train), ym.select_rows(&splits.train));
    let (x_val, y_val) = (xm.select_rows(&splits.validation), ym.select_rows(&splits.validation));

    let mut penalties = cfg.penalties.clone();
    penalties.sort_by(f64::total_cmp);
    let mut warnings = Vec::new();
    let mut validation_r = Vec::with_capacity(penalties.len());
    let mut best: Option<(f64, RidgeModel)> = None;
    for &lambda in &penalties {
        match fit_ridge(&x_train, &y_train, lambda) {
            Ok(fit) => {
                let r = mean(&columnwise_pearson(&fit.predict(&x_val)?, &y_val));
                validation_r.push(Some(r));
                if best.as_ref().map_or(true, |(b, _)| r > *b) {
                    best = Some((r, fit));
                }
            }
            Err(Error::Numerical(msg)) => {
                let w = format!("penalty {lambda:e} skipped: {msg}");
                log::warn!("{w}");
                warnings.push(w);
                validation_r.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let (_, fit) = best.ok_or_else(|| Error::Numerical("every ridge penalty was ill-conditioned".into()))?;
    let test_r = columnwise_pearson(
        &fit.predict(&xm.select_rows(&splits.test))?,
        &ym.select_rows(&splits.test),
    );
    Ok(PredictivityReport {
        chosen_penalty: fit.penalty,
        mean_test_r: mean(&test_r),
        test_r,
        penalties,
        validation_r,
        n_train: splits.train.len(),
        n_validation: splits.validation.len(),
        n_test: splits.test.len(),
        warnings,
        model: fit,
        splits,
    })
}
