//! Command-line interface to the coin-flip circuit toolkit.
//!
//! Exit codes: 0 on success, 2 for usage or validation errors, 3 for
//! runtime and data errors (missing files, malformed CSVs, unwritable
//! outputs). Every seeded subcommand is fully deterministic: the same
//! invocation produces byte-identical files, SVG plots included.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod common;
mod manifest;
mod plot;

use commands::{evaluate, optimize, plot_cmd, runs, sample, solve, sweep, weight_sweep};

#[derive(Parser)]
#[command(
    name = "coincirc",
    version,
    about = "Evaluate, solve, optimize, sample, and sweep hidden-dependence coin-flip circuits"
)]
struct Cli {
    /// Cap the worker-thread count; results never depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact analytics of one circuit: v(0..3), KL, fairness, energy, fitness
    Evaluate(evaluate::EvaluateArgs),
    /// Decide whether a target factors into two independent coins
    Solve(solve::SolveArgs),
    /// Run the evolutionary optimizer and write best.json + history.csv
    Optimize(optimize::OptimizeArgs),
    /// Draw n samples from a circuit and write an empirical report
    Sample(sample::SampleArgs),
    /// Sample-size sweep: (sizes x trials) cells of empirical KL and energy
    Sweep(sweep::SweepArgs),
    /// Vary one objective weight at a time, re-optimizing per setting
    WeightSweep(weight_sweep::WeightSweepArgs),
    /// Repeated independent optimizations with derived per-run seeds
    Runs(runs::RunsArgs),
    /// Render a result CSV into a deterministic SVG figure
    Plot(plot_cmd::PlotArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // build_global fails if a pool already exists; first call wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Evaluate(args) => evaluate::run(args),
        Command::Solve(args) => solve::run(args),
        Command::Optimize(args) => optimize::run(args),
        Command::Sample(args) => sample::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::WeightSweep(args) => weight_sweep::run(args),
        Command::Runs(args) => runs::run(args),
        Command::Plot(args) => plot_cmd::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
