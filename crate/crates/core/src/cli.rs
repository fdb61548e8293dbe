//! Drivers behind the `rsk` command-line tool. Each `run_*` function takes a
//! validated request, performs the work, and returns a JSON document.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::{
    build_fig3a_networks, linear_predictivity, rotation_sweep, PredictivityConfig, RotationSweepConfig,
};
use crate::io::{load_activations, save_activations, to_csv, write_text, ActivationFile, ActivationFormat};
use crate::metrics::{check_metric_axioms, evaluate, metric_value, MetricKind, MetricReport, NuisanceClass};
use crate::preprocess::{preprocess, ActivationMatrix, Preprocessing};
use crate::rng;

/// Version of the JSON documents emitted by the drivers.
pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "RSK_THREADS";

fn envelope(command: &str, body: Value) -> Value {
    let mut doc = json!({
        "schema": SCHEMA_VERSION,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

/// Runs `f` on a rayon pool capped by `RSK_THREADS` when it is set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

fn load(path: &Path) -> Result<ActivationMatrix> {
    load_activations(&ActivationFile::infer(path))
}

fn prepared(raw: &ActivationMatrix, mode: Preprocessing) -> Result<ActivationMatrix> {
    if mode == Preprocessing::Raw {
        Ok(raw.clone())
    } else {
        preprocess(raw, mode)
    }
}

fn resolve_mode(metric: MetricKind, requested: Option<Preprocessing>) -> Result<Preprocessing> {
    let mode = requested.unwrap_or(metric.default_preprocessing());
    if !metric.accepts(mode) {
        return Err(Error::Preprocessing(format!(
            "{} cannot run on {} inputs",
            metric.name(),
            mode.name()
        )));
    }
    Ok(mode)
}

#[derive(Debug, Clone)]
pub struct ComparisonRequest {
    pub x: PathBuf,
    /// Compared against `x` independently, in parallel.
    pub ys: Vec<PathBuf>,
    pub metrics: Vec<MetricKind>,
    /// Overrides each metric's default normalization.
    pub preprocessing: Option<Preprocessing>,
    pub seed: u64,
    pub include_witness: bool,
}

#[derive(Debug, Serialize)]
struct TimedReport {
    #[serde(flatten)]
    report: MetricReport,
    elapsed_seconds: f64,
}

#[derive(Debug, Serialize)]
struct SizeScaling {
    n: usize,
    one_to_one_matching_distance: f64,
    soft_matching_distance: f64,
    sqrt_n_times_soft_matching_distance: f64,
}

#[derive(Debug, Serialize)]
struct PairResult {
    y: String,
    reports: Vec<TimedReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equal_size_scaling: Option<SizeScaling>,
}

/// Compares `x` against every `y` under each requested metric.
///
/// When both the one-to-one and soft matching distances are computed under
/// the same normalization for an equal-size pair, the report also lists
/// `√N · d_soft` next to the one-to-one distance.
pub fn run_compare(req: &ComparisonRequest) -> Result<Value> {
    if req.metrics.is_empty() {
        return Err(Error::InvalidArgument("no metric requested".into()));
    }
    if req.ys.is_empty() {
        return Err(Error::InvalidArgument("no comparison target given".into()));
    }
    let modes: Vec<Preprocessing> =
        req.metrics.iter().map(|&m| resolve_mode(m, req.preprocessing)).collect::<Result<_>>()?;
    let start = Instant::now();
    let x_raw = load(&req.x)?;
    let pairs: Vec<PairResult> = with_thread_cap(|| {
        req.ys
            .par_iter()
            .map(|y_path| -> Result<PairResult> {
                let y_raw = load(y_path)?;
                if x_raw.stimuli() != y_raw.stimuli() {
                    return Err(Error::Dimension(format!(
                        "stimulus counts differ: {} has {} rows, {} has {} rows",
                        req.x.display(),
                        x_raw.stimuli(),
                        y_path.display(),
                        y_raw.stimuli()
                    )));
                }
                let mut reports = Vec::new();
                for (&metric, &mode) in req.metrics.iter().zip(&modes) {
                    let t = Instant::now();
                    let x = prepared(&x_raw, mode)?;
                    let y = prepared(&y_raw, mode)?;
                    let mut report = evaluate(metric, &x, &y)?;
                    if !req.include_witness {
                        report.witness = None;
                    }
                    reports.push(TimedReport { report, elapsed_seconds: t.elapsed().as_secs_f64() });
                }
                let equal_size_scaling = scaling_check(&req.metrics, &modes, &reports);
                Ok(PairResult { y: y_path.display().to_string(), reports, equal_size_scaling })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(envelope(
        "compare",
        json!({
            "x": req.x.display().to_string(),
            "seed": req.seed,
            "results": pairs,
            "elapsed_seconds": start.elapsed().as_secs_f64(),
        }),
    ))
}

fn scaling_check(metrics: &[MetricKind], modes: &[Preprocessing], reports: &[TimedReport]) -> Option<SizeScaling> {
    let find = |k: MetricKind| metrics.iter().position(|&m| m == k);
    let (p, t) = (find(MetricKind::OneToOneDistance)?, find(MetricKind::SoftMatchingDistance)?);
    if modes[p] != modes[t] {
        return None;
    }
    let (_, nx, ny) = reports[t].report.sizes;
    (nx == ny).then(|| SizeScaling {
        n: nx,
        one_to_one_matching_distance: reports[p].report.value,
        soft_matching_distance: reports[t].report.value,
        sqrt_n_times_soft_matching_distance: (nx as f64).sqrt() * reports[t].report.value,
    })
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub x: PathBuf,
    pub y: PathBuf,
    pub metric: MetricKind,
    pub preprocessing: Option<Preprocessing>,
    pub alphas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    /// Optional `alpha,mean,std` CSV for plotting.
    pub csv_out: Option<PathBuf>,
    pub include_rotations: bool,
}

pub fn run_sweep(req: &SweepRequest) -> Result<Value> {
    let mode = resolve_mode(req.metric, req.preprocessing)?;
    let cfg = RotationSweepConfig::new(req.alphas.clone(), req.metric, req.seed, req.samples)?;
    let start = Instant::now();
    let x = prepared(&load(&req.x)?, mode)?;
    let y = prepared(&load(&req.y)?, mode)?;
    let mut result = with_thread_cap(|| rotation_sweep(&x, &y, &cfg))??;
    if let Some(path) = &req.csv_out {
        write_text(path, &result.to_csv())?;
    }
    if !req.include_rotations {
        result.rotations.clear();
    }
    Ok(envelope(
        "sweep",
        json!({
            "x": req.x.display().to_string(),
            "y": req.y.display().to_string(),
            "seed": req.seed,
            "samples": req.samples,
            "result": result,
            "elapsed_seconds": start.elapsed().as_secs_f64(),
        }),
    ))
}

#[derive(Debug, Clone)]
pub struct PredictivityRequest {
    pub model: PathBuf,
    pub target: PathBuf,
    pub seed: u64,
}

pub fn run_predictivity(req: &PredictivityRequest) -> Result<Value> {
    let start = Instant::now();
    let model = load(&req.model)?;
    let target = load(&req.target)?;
    let report = linear_predictivity(&model, &target, &PredictivityConfig::with_seed(req.seed))?;
    Ok(envelope(
        "predictivity",
        json!({
            "model": req.model.display().to_string(),
            "target": req.target.display().to_string(),
            "seed": req.seed,
            "split": { "train": 0.70, "validation": 0.10, "test": 0.20 },
            "report": report,
            "elapsed_seconds": start.elapsed().as_secs_f64(),
        }),
    ))
}

#[derive(Debug, Clone)]
pub struct AxiomRequest {
    pub metric: MetricKind,
    pub preprocessing: Option<Preprocessing>,
    pub triples: usize,
    pub stimuli: usize,
    /// Unit counts are drawn from `2..=max_units` (all equal for the
    /// one-to-one distance).
    pub max_units: usize,
    pub slack: f64,
    pub seed: u64,
}

/// Random heterogeneous triples of standard normal activations.
pub fn random_triples(
    count: usize,
    stimuli: usize,
    max_units: usize,
    equal_sizes: bool,
    mode: Preprocessing,
    seed: u64,
) -> Result<Vec<(ActivationMatrix, ActivationMatrix, ActivationMatrix)>> {
    use rand::RngExt;
    if max_units < 2 {
        return Err(Error::InvalidArgument("max_units must be at least 2".into()));
    }
    let mut g = rng::seeded(seed);
    (0..count)
        .map(|_| {
            let shared = g.random_range(2..=max_units);
            let draw = |g: &mut rng::SeededRng| {
                let n = if equal_sizes { shared } else { g.random_range(2..=max_units) };
                prepared(&ActivationMatrix::raw(rng::standard_normal_matrix(stimuli, n, g)), mode)
            };
            Ok((draw(&mut g)?, draw(&mut g)?, draw(&mut g)?))
        })
        .collect()
}

pub fn run_axiom_check(req: &AxiomRequest) -> Result<Value> {
    if !req.metric.is_distance() {
        return Err(Error::InvalidArgument(format!(
            "{} is a similarity score, not a distance",
            req.metric.name()
        )));
    }
    let mode = resolve_mode(req.metric, req.preprocessing)?;
    let nuisance = if req.metric == MetricKind::Procrustes {
        NuisanceClass::Orthogonal
    } else {
        NuisanceClass::Permutation
    };
    let equal = req.metric == MetricKind::OneToOneDistance;
    let start = Instant::now();
    let triples = random_triples(req.triples, req.stimuli, req.max_units, equal, mode, req.seed)?;
    let metric = req.metric;
    let report = with_thread_cap(|| {
        check_metric_axioms(|a, b| metric_value(metric, a, b), nuisance, &triples, req.slack, req.seed)
    })??;
    Ok(envelope(
        "axioms",
        json!({
            "metric": req.metric.name(),
            "preprocessing": mode,
            "seed": req.seed,
            "stimuli": req.stimuli,
            "report": report,
            "elapsed_seconds": start.elapsed().as_secs_f64(),
        }),
    ))
}

/// Writes the three counterexample networks as `x`, `y`, `z` files in `dir`.
pub fn write_fig3a_fixture(dir: &Path, format: ActivationFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let ext = match format {
        ActivationFormat::Csv => "csv",
        ActivationFormat::Rawbin => "rsk",
    };
    let (x, y, z) = build_fig3a_networks();
    let mut written = Vec::new();
    for (name, m) in [("x", x), ("y", y), ("z", z)] {
        let path = dir.join(format!("{name}.{ext}"));
        save_activations(&ActivationFile::new(&path, format), m.data())?;
        written.push(path);
    }
    Ok(written)
}

/// Writes an i.i.d. standard normal `rows × cols` matrix.
pub fn write_random_fixture(path: &Path, rows: usize, cols: usize, seed: u64) -> Result<()> {
    let m = rng::standard_normal_matrix(rows, cols, &mut rng::seeded(seed));
    let file = ActivationFile::infer(path);
    match file.format {
        ActivationFormat::Csv => write_text(path, &to_csv(&m)),
        ActivationFormat::Rawbin => save_activations(&file, &m),
    }
}

/// Machine-readable error document for the error stream.
pub fn error_json(e: &Error) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "error": e.kind(),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    })
}

/// Removes every `elapsed_seconds` field, leaving the deterministic part.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_seconds");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
