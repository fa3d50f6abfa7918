use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use densedp::{run_experiment, write_csv, Algorithm, ExperimentConfig, InputSpec};
use densedp_core::{Error, Result};

/// Differentially private densest-subgraph experiments.
#[derive(Parser)]
#[command(name = "densedp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and write one CSV row per trial.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list input file (whitespace-separated id pairs, # comments).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Synthetic input: planted:n,k or twoclique:k1,k2.
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,

    /// Algorithm: exact, charikar, dp-quasilinear, dp-linear, rr-baseline.
    #[arg(long, value_name = "ID")]
    alg: String,

    /// Comma-separated epsilon grid, e.g. 0.5,1,2,4,8.
    #[arg(long, value_name = "LIST", default_value = "1")]
    eps: String,

    /// Tail-failure probability budgeted to the noise bounds.
    #[arg(long, value_name = "FLOAT", default_value_t = 2f64.powi(-30))]
    sigma: f64,

    /// Flush-threshold constant.
    #[arg(long = "C", value_name = "FLOAT", default_value_t = 0.5)]
    threshold_constant: f64,

    /// Bucket width for dp-linear; 0 derives it from the error analysis.
    #[arg(long, value_name = "INT", default_value_t = 1)]
    bucket_width: u64,

    /// Independent trials per epsilon grid point.
    #[arg(long, value_name = "INT", default_value_t = 1)]
    trials: u32,

    /// Base RNG seed; trial i runs with seed base+i.
    #[arg(long, value_name = "INT", default_value_t = 0)]
    seed: u64,

    /// Output CSV path.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,

    /// Cap on parallel trials (overrides DENSEDP_THREADS).
    #[arg(long, value_name = "INT")]
    threads: Option<usize>,
}

fn parse_eps_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad epsilon value {part:?}")))
        })
        .collect()
}

fn run(args: RunArgs) -> Result<()> {
    let input = match (args.input, args.gen) {
        (Some(path), None) => InputSpec::File(path),
        (None, Some(spec)) => InputSpec::parse_gen(&spec)?,
        _ => {
            return Err(Error::Domain(
                "exactly one of --input or --gen is required".into(),
            ))
        }
    };
    let config = ExperimentConfig {
        input,
        algorithm: Algorithm::parse(&args.alg)?,
        epsilons: parse_eps_list(&args.eps)?,
        sigma: args.sigma,
        threshold_constant: args.threshold_constant,
        bucket_width: args.bucket_width,
        trials: args.trials,
        base_seed: args.seed,
        threads: args.threads,
    };
    let records = run_experiment(&config)?;
    let file = File::create(&args.out)?;
    write_csv(BufWriter::new(file), &records)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::Domain(_) => ExitCode::from(2),
                Error::Io(_) | Error::State(_) => ExitCode::from(3),
            }
        }
    }
}
