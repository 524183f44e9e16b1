use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entropic_cli::eval::{evaluate_problem, render_reports};
use entropic_cli::format::Format;
use entropic_cli::input::read_problem;
use entropic_cli::select::{DimsList, RelationSet};
use entropic_cli::sweep::{run_bloch_sweep, run_werner_sweep};
use entropic_cli::verify::{run_verify, VerifyConfig};
use entropic_cli::{CliError, Output, EXIT_USAGE};
use entropic_core::exec::Execution;
use entropic_core::relations::DEFAULT_TOL;

/// Verify entropic uncertainty/disturbance relations and reproduce the
/// Werner and Bloch example curves.
#[derive(Debug, Parser)]
#[command(name = "entropic", version)]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance for judging relations.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads: 1 runs sequentially, 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo verification over random states and bases.
    Verify {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Bipartite dimensions, e.g. 2x2,2x3,3x3.
        #[arg(long, default_value = "2x2,2x3,3x3")]
        dims: DimsList,
        /// Comma-separated relation names, or `all`.
        #[arg(long, default_value = "all")]
        relations: RelationSet,
    },
    /// Werner-state curves on a uniform η grid over [0, 1].
    WernerSweep {
        #[arg(long, default_value_t = 101)]
        eta_steps: usize,
    },
    /// Bloch-qubit surfaces on an (r3, θ) grid over [0, 1] × [0, π].
    BlochSweep {
        #[arg(long, default_value_t = 51)]
        r3_steps: usize,
        #[arg(long, default_value_t = 51)]
        theta_steps: usize,
    },
    /// Evaluate relations on a state and measurements read from JSON.
    Eval {
        input: PathBuf,
        #[arg(long, default_value = "all")]
        relations: RelationSet,
    },
}

fn dispatch(cli: &Cli, exec: Execution) -> Result<Output, CliError> {
    match &cli.command {
        Command::Verify {
            trials,
            dims,
            relations,
        } => {
            let cfg = VerifyConfig {
                trials: usize::try_from(*trials)
                    .map_err(|_| CliError::Usage("--trials is too large".into()))?,
                seed: cli.seed,
                dims: dims.clone(),
                tol: cli.tol,
                relations: relations.clone(),
            };
            let outcome = run_verify(&cfg, exec)?;
            Ok(Output::new(outcome.render(cli.format), outcome.passed()))
        }
        Command::WernerSweep { eta_steps } => {
            let sweep = run_werner_sweep(*eta_steps, exec)?;
            Ok(Output::new(sweep.render(cli.format), sweep.passed()))
        }
        Command::BlochSweep {
            r3_steps,
            theta_steps,
        } => {
            let sweep = run_bloch_sweep(*r3_steps, *theta_steps, exec)?;
            Ok(Output::new(sweep.render(cli.format), sweep.passed()))
        }
        Command::Eval { input, relations } => {
            let problem = read_problem(input)?;
            let reports = evaluate_problem(&problem, relations, cli.tol)?;
            let passed = !reports.iter().any(|r| r.violated());
            Ok(Output::new(render_reports(&reports, cli.format), passed))
        }
    }
}

#[cfg(feature = "parallel")]
fn run_with_jobs(cli: &Cli) -> Result<Output, CliError> {
    match cli.jobs {
        1 => dispatch(cli, Execution::Sequential),
        0 => dispatch(cli, Execution::Parallel),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?
            .install(|| dispatch(cli, Execution::Parallel)),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_jobs(cli: &Cli) -> Result<Output, CliError> {
    dispatch(cli, Execution::Sequential)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        eprintln!("error: --tol must be a finite non-negative number");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    let result = run_with_jobs(&cli).and_then(|out| {
        out.emit(cli.out.as_deref())?;
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
