use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use rsk::cli::{self, AxiomRequest, ComparisonRequest, PredictivityRequest, SweepRequest};
use rsk::io::{write_text, ActivationFormat};
use rsk::{Error, MetricKind, Preprocessing};

#[derive(Parser)]
#[command(name = "rsk", version, about = "Permutation-invariant similarity metrics for neural representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Soft,
    SoftCorr,
    #[value(name = "one2one")]
    OneToOne,
    Semi,
    Rect,
    Procrustes,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Soft => MetricKind::SoftMatchingDistance,
            MetricArg::SoftCorr => MetricKind::SoftMatchingCorrelation,
            MetricArg::OneToOne => MetricKind::OneToOneDistance,
            MetricArg::Semi => MetricKind::SemiMatching,
            MetricArg::Rect => MetricKind::RectangularMatching,
            MetricArg::Procrustes => MetricKind::Procrustes,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PreprocessArg {
    Frob,
    UnitCols,
    UnitColsUncentered,
    Raw,
}

impl From<PreprocessArg> for Preprocessing {
    fn from(p: PreprocessArg) -> Self {
        match p {
            PreprocessArg::Frob => Preprocessing::CenteredFrobUnit,
            PreprocessArg::UnitCols => Preprocessing::CenteredUnitColumns,
            PreprocessArg::UnitColsUncentered => Preprocessing::UnitColumnsUncentered,
            PreprocessArg::Raw => Preprocessing::Raw,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare one activation file against one or more others.
    Compare {
        x: PathBuf,
        #[arg(required = true)]
        y: Vec<PathBuf>,
        /// Repeat or comma-separate to compute several metrics.
        #[arg(long, value_delimiter = ',', default_value = "soft")]
        metric: Vec<MetricArg>,
        #[arg(long)]
        preprocess: Option<PreprocessArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include optimal plans, matchings or rotations in the report.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotate x by fractional powers of random rotations and track a metric.
    Sweep {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value = "soft-corr")]
        metric: MetricArg,
        #[arg(long)]
        preprocess: Option<PreprocessArg>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write alpha,mean,std rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        rotations: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ridge-regression predictivity of a target from model activations.
    Predictivity {
        model: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check symmetry, triangle inequality and nuisance invariance on random data.
    Axioms {
        #[arg(long, default_value = "soft")]
        metric: MetricArg,
        #[arg(long)]
        preprocess: Option<PreprocessArg>,
        #[arg(long, default_value_t = 20)]
        triples: usize,
        #[arg(long, default_value_t = 12)]
        stimuli: usize,
        #[arg(long, default_value_t = 8)]
        max_units: usize,
        #[arg(long, default_value_t = 1e-8)]
        slack: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write fixture files.
    Fixture {
        #[command(subcommand)]
        kind: FixtureKind,
    },
}

#[derive(Subcommand)]
enum FixtureKind {
    /// The x/y/z semi-matching counterexample networks.
    Fig3a {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        rawbin: bool,
    },
    /// An i.i.d. standard normal matrix (.csv or rawbin by extension).
    Random {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn emit(doc: Value, out: Option<PathBuf>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    match out {
        Some(path) => write_text(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Compare { x, y, metric, preprocess, seed, witness, out } => {
            let req = ComparisonRequest {
                x,
                ys: y,
                metrics: metric.into_iter().map(Into::into).collect(),
                preprocessing: preprocess.map(Into::into),
                seed,
                include_witness: witness,
            };
            emit(cli::run_compare(&req)?, out)
        }
        Command::Sweep { x, y, metric, preprocess, alphas, samples, seed, csv, rotations, out } => {
            let req = SweepRequest {
                x,
                y,
                metric: metric.into(),
                preprocessing: preprocess.map(Into::into),
                alphas,
                samples,
                seed,
                csv_out: csv,
                include_rotations: rotations,
            };
            emit(cli::run_sweep(&req)?, out)
        }
        Command::Predictivity { model, target, seed, out } => {
            emit(cli::run_predictivity(&PredictivityRequest { model, target, seed })?, out)
        }
        Command::Axioms { metric, preprocess, triples, stimuli, max_units, slack, seed, out } => {
            let req = AxiomRequest {
                metric: metric.into(),
                preprocessing: preprocess.map(Into::into),
                triples,
                stimuli,
                max_units,
                slack,
                seed,
            };
            emit(cli::run_axiom_check(&req)?, out)
        }
        Command::Fixture { kind } => match kind {
            FixtureKind::Fig3a { out, rawbin } => {
                let format = if rawbin { ActivationFormat::Rawbin } else { ActivationFormat::Csv };
                for p in cli::write_fig3a_fixture(&out, format)? {
                    println!("{}", p.display());
                }
                Ok(())
            }
            FixtureKind::Random { rows, cols, seed, out } => cli::write_random_fixture(&out, rows, cols, seed),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", cli::error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
