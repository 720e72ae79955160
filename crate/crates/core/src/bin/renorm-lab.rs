use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use renorm_lab::base::SplitNormSpec;
use renorm_lab::suites::{run_suite, Suite, SuiteParams};
use renorm_lab::{
    FinalNormSpec, HullGauge, LabError, LiftedModel, ModelConfig, NormHandle, TruncatedVector,
};

#[derive(Parser)]
#[command(
    name = "renorm-lab",
    version,
    about = "Evaluate the lab's norms and run probe suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Base,
    Split,
    Theta,
    Hull,
    Final,
    L1,
    Lifted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print one norm of a comma-separated vector.
    Eval {
        #[arg(long, value_enum)]
        norm: NormArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Head dimension for `--norm lifted` (default: half the vector).
        #[arg(long)]
        split: Option<usize>,
    },
    /// Run a named suite and write its report.
    Suite {
        name: String,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nmax: Option<usize>,
        /// Index range `lo:hi`.
        #[arg(long)]
        nrange: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        pairs: Option<usize>,
    },
}

fn parse_vector(s: &str) -> Result<TruncatedVector, LabError> {
    let coords = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| LabError::Parse(format!("'{}': {e}", c.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    TruncatedVector::new(coords).map_err(|e| LabError::Parse(e.to_string()))
}

fn parse_range(s: &str) -> Result<(usize, usize), LabError> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| LabError::Parse(format!("range '{s}' is not lo:hi")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|e| LabError::Parse(format!("'{v}': {e}")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn model_config(dim: usize, p: f64, tol: f64) -> Result<ModelConfig, LabError> {
    ModelConfig::new(dim, p)?.with_gauge_tol(tol)
}

/// Smallest dimension the final-norm model accepts.
const MIN_MODEL_DIM: usize = 4;

fn eval(norm: NormArg, x: &str, p: f64, tol: f64, split: Option<usize>) -> Result<f64, LabError> {
    let mut x = parse_vector(x)?;
    if matches!(norm, NormArg::Final) && x.dim() < MIN_MODEL_DIM {
        // trailing zeros change neither the gauge nor the tail series
        x = TruncatedVector::from_prefix(MIN_MODEL_DIM, x.as_slice())?;
    }
    let dim = x.dim();
    let handle = match norm {
        NormArg::Base => NormHandle::BaseP(p),
        NormArg::Split => NormHandle::Split(SplitNormSpec::new(p, dim)?),
        NormArg::Theta => NormHandle::Theta,
        NormArg::Hull => NormHandle::HullGauge(HullGauge::new(SplitNormSpec::new(p, dim)?, tol)),
        NormArg::Final => NormHandle::final_norm(FinalNormSpec::new(&model_config(dim, p, tol)?)?),
        NormArg::L1 => NormHandle::TroyanskiL1,
        NormArg::Lifted => NormHandle::Lifted(Box::new(LiftedModel::new(
            &model_config(dim, p, tol)?,
            split.unwrap_or(dim / 2),
        )?)),
    };
    handle.eval(&x)
}

fn configure_threads() {
    if let Some(n) = std::env::var("RENORM_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match cli.command {
        Command::Eval {
            norm,
            x,
            p,
            tol,
            split,
        } => match eval(norm, &x, p, tol, split) {
            Ok(v) => {
                println!("{v:?}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Suite {
            name,
            model,
            format,
            out,
            nmax,
            nrange,
            samples,
            points,
            pairs,
        } => {
            let run = || -> Result<(String, bool), LabError> {
                let suite: Suite = name.parse()?;
                let params = SuiteParams {
                    dim: model.dim,
                    p: model.p,
                    tol: model.tol,
                    seed: model.seed,
                    nmax,
                    nrange: nrange.as_deref().map(parse_range).transpose()?,
                    samples,
                    points,
                    pairs,
                };
                let start = Instant::now();
                let output = run_suite(suite, &params)?;
                let runtime_ms = start.elapsed().as_millis();
                let passed = output.report.passed();
                let text = match format {
                    Format::Json => {
                        let timestamp = SystemTime::now()
                            .duration_since(UNIX_EPOCH)
                            .map_or(0, |d| d.as_secs());
                        output.report.to_json(runtime_ms, timestamp)
                    }
                    Format::Csv => match &output.table {
                        Some(t) => t.to_csv(),
                        None => output.report.to_csv(),
                    },
                };
                Ok((text, passed))
            };
            match run() {
                Ok((text, passed)) => {
                    match &out {
                        Some(path) => {
                            if let Err(e) = fs::write(path, &text) {
                                eprintln!("error: cannot write {}: {e}", path.display());
                                return ExitCode::from(2);
                            }
                        }
                        None => print!("{text}"),
                    }
                    if passed {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("suite {name}: at least one check failed");
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
