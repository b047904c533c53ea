use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use brownmin::report::{format_float, write_errors_csv, write_trace_csv};
use brownmin::{
    lambda_suggestion, run_experiment, simulate_path, with_threads, Algorithm, Execution,
    ExperimentPlan, MinimizerConfig, DEFAULT_LEVEL_CAP,
};
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

/// Adaptive minimization of Brownian paths: traces, error curves and
/// comparisons with the equidistant baseline, written as CSV.
#[derive(Parser, Debug)]
#[command(name = "brownmin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace one adaptive run on a Brownian path.
    Simulate(SimulateArgs),
    /// Estimate L_p errors over many replications.
    Experiment(ExperimentArgs),
    /// Estimate L_p errors for the adaptive method and the equidistant baseline.
    Compare(CompareArgs),
    /// Print a lambda sufficient for convergence order r in the L_p norm.
    SuggestLambda(SuggestArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    lambda: f64,
    /// Number of evaluations after t = 0.
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Index of the Brownian path drawn from the seed.
    #[arg(long, default_value_t = 0)]
    replication: u64,
    #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
    level_cap: u32,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long, value_delimiter = ',', default_value = "1")]
    lambdas: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    reps: u64,
    #[arg(long = "n-grid", value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximal number of worker threads; does not change the output.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
    level_cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value = "adaptive", value_parser = ["adaptive", "equidistant"])]
    algorithm: String,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    curve: CurveArgs,
}

#[derive(Args, Debug)]
struct SuggestArgs {
    /// Target convergence order.
    #[arg(long)]
    r: f64,
    #[arg(long)]
    p: f64,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<brownmin::Error> for Failure {
    fn from(e: brownmin::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::Experiment(args) => {
            let algorithm: Algorithm = args.algorithm.parse().map_err(usage)?;
            let plan = build_plan(&args.curve, algorithm)?;
            let rows = with_threads(args.curve.threads, || {
                run_experiment(&plan, Execution::Parallel)
            })?;
            emit(&args.curve.out, |w| write_errors_csv(w, &rows))
        }
        Command::Compare(args) => {
            let adaptive = build_plan(&args.curve, Algorithm::Adaptive)?;
            let baseline = build_plan(&args.curve, Algorithm::Equidistant)?;
            let rows = with_threads(args.curve.threads, || {
                let mut rows = run_experiment(&adaptive, Execution::Parallel)?;
                rows.extend(run_experiment(&baseline, Execution::Parallel)?);
                Ok::<_, brownmin::Error>(rows)
            })?;
            emit(&args.curve.out, |w| write_errors_csv(w, &rows))
        }
        Command::SuggestLambda(args) => {
            for (name, v) in [("r", args.r), ("p", args.p)] {
                if !(v.is_finite() && v >= 1.0) {
                    return Err(Failure::Usage(format!("--{name} must be >= 1, got {v}")));
                }
            }
            println!("{}", format_float(lambda_suggestion(args.r, args.p)));
            Ok(())
        }
    }
}

fn usage(e: brownmin::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config =
        MinimizerConfig::with_level_cap(args.lambda, args.steps, args.level_cap).map_err(usage)?;
    let run = simulate_path(&config, args.seed, args.replication)?;
    emit(&args.out, |w| write_trace_csv(w, &run))
}

fn build_plan(args: &CurveArgs, algorithm: Algorithm) -> Result<ExperimentPlan, Failure> {
    if args.threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let plan = ExperimentPlan::new(
        algorithm,
        args.lambdas.clone(),
        args.n_grid.clone(),
        args.p,
        args.reps,
        args.seed,
    )
    .map_err(usage)?;
    Ok(plan.with_level_cap(args.level_cap))
}

fn emit(
    out: &Option<PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> brownmin::Result<()>,
) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}
