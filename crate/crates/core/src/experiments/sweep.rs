//! Rotation sweeps: how a metric changes as one representation is rotated
//! from its own basis toward a random basis along a geodesic of SO(N).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, sample_haar_special_orthogonal_with, so_log, Matrix, OrthogonalMatrix};
use crate::metrics::{metric_value, MetricKind};
use crate::preprocess::{preprocess, ActivationMatrix, Preprocessing};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationSweepConfig {
    /// Strictly increasing, within [0, 1], containing both endpoints.
    pub alphas: Vec<f64>,
    pub seed: u64,
    pub metric: MetricKind,
    /// Independent Haar rotations to average over.
    pub samples: usize,
}

impl RotationSweepConfig {
    pub fn new(alphas: Vec<f64>, metric: MetricKind, seed: u64, samples: usize) -> Result<Self> {
        let cfg = Self { alphas, seed, metric, samples };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `steps + 1` evenly spaced values from 0 to 1.
    pub fn evenly_spaced(steps: usize, metric: MetricKind, seed: u64, samples: usize) -> Result<Self> {
        let steps = steps.max(1);
        let alphas = (0..=steps).map(|k| k as f64 / steps as f64).collect();
        Self::new(alphas, metric, seed, samples)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.alphas;
        if a.first() != Some(&0.0) || a.last() != Some(&1.0) {
            return Err(Error::InvalidArgument("alphas must start at 0 and end at 1".into()));
        }
        if a.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("alphas must be strictly increasing".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("at least one rotation sample is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metric: String,
    pub alphas: Vec<f64>,
    /// `values[s][k]`: metric for rotation sample `s` at `alphas[k]`.
    pub values: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Sample standard deviation across rotations (0 for a single sample).
    pub std: Vec<f64>,
    /// The sampled rotations, one per sample.
    pub rotations: Vec<Matrix>,
    /// Haar draws discarded because their logarithm was ambiguous.
    pub resamples: usize,
    pub preprocessing: Preprocessing,
    /// `(M, N_x, N_y)`.
    pub sizes: (usize, usize, usize),
}

/// Evaluates `metric(x · Q^α, y)` along the sweep for each sampled `Q`.
///
/// `x` and `y` must already carry the normalization the metric expects;
/// after rotation `x` is normalized again with its own tag.
pub fn rotation_sweep(x: &ActivationMatrix, y: &ActivationMatrix, cfg: &RotationSweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let n = x.units();
    let mut g = rng::seeded(cfg.seed);
    let mut rotations = Vec::with_capacity(cfg.samples);
    let mut logs = Vec::with_capacity(cfg.samples);
    let mut resamples = 0;
    while rotations.len() < cfg.samples {
        let q = sample_haar_special_orthogonal_with(n, &mut g)?;
        match so_log(&q) {
            Ok(l) => {
                rotations.push(q);
                logs.push(l);
            }
            Err(Error::BranchAmbiguity { .. }) if resamples < 100 => {
                log::warn!("rotation sample had an angle at pi; drawing another");
                resamples += 1;
            }
            Err(e) => return Err(e),
        }
    }

    let jobs: Vec<(usize, usize)> =
        (0..cfg.samples).flat_map(|s| (0..cfg.alphas.len()).map(move |k| (s, k))).collect();
    let flat: Vec<f64> = jobs
        .par_iter()
        .map(|&(s, k)| {
            let alpha = cfg.alphas[k];
            let rotated = if alpha == 0.0 {
                x.clone()
            } else {
                let q_alpha = if alpha == 1.0 {
                    rotations[s].clone()
                } else {
                    OrthogonalMatrix::special(matrix_exp(&logs[s].scale(alpha))?)?
                };
                renormalize(&x.transform(q_alpha.matrix())?, x.preprocessing())?
            };
            metric_value(cfg.metric, &rotated, y)
        })
        .collect::<Result<_>>()?;

    let k = cfg.alphas.len();
    let values: Vec<Vec<f64>> = flat.chunks(k).map(|c| c.to_vec()).collect();
    let (mean, std) = column_mean_std(&values, k);
    Ok(SweepResult {
        metric: cfg.metric.name().to_string(),
        alphas: cfg.alphas.clone(),
        values,
        mean,
        std,
        rotations: rotations.into_iter().map(OrthogonalMatrix::into_matrix).collect(),
        resamples,
        preprocessing: x.preprocessing(),
        sizes: (x.stimuli(), x.units(), y.units()),
    })
}

fn renormalize(x: &ActivationMatrix, mode: Preprocessing) -> Result<ActivationMatrix> {
    if mode == Preprocessing::Raw {
        Ok(x.clone())
    } else {
        preprocess(x, mode)
    }
}

fn column_mean_std(values: &[Vec<f64>], k: usize) -> (Vec<f64>, Vec<f64>) {
    let s = values.len() as f64;
    let mean: Vec<f64> = (0..k).map(|j| values.iter().map(|v| v[j]).sum::<f64>() / s).collect();
    let std = (0..k)
        .map(|j| {
            if values.len() < 2 {
                0.0
            } else {
                (values.iter().map(|v| (v[j] - mean[j]).powi(2)).sum::<f64>() / (s - 1.0)).sqrt()
            }
        })
        .collect();
    (mean, std)
}

impl SweepResult {
    /// Plot-ready `alpha,mean,std` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,mean,std\n");
        for k in 0..self.alphas.len() {
            out.push_str(&format!("{},{},{}\n", self.alphas[k], self.mean[k], self.std[k]));
        }
        out
    }
}
