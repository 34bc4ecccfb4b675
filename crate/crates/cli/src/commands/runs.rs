//! `runs` — repeated independent optimizations with derived per-run seeds,
//! one CSV row per run.

use std::path::PathBuf;

use clap::Args;
use coincirc::harness::runs_csv;
use coincirc::run_repeated_optimizations;

use crate::commands::{EvoArgs, WeightArgs, DEFAULT_TARGET};
use crate::common::{
    parse_target, resolve_device, sig6, to_pretty_json, write_outputs, CliResult, OutputFile,
};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct RunsArgs {
    /// Built-in device name or path to a JSON config
    #[arg(long, default_value = "td")]
    device: String,
    /// Target distribution as four comma-separated probabilities
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    #[command(flatten)]
    weights: WeightArgs,
    #[command(flatten)]
    evo: EvoArgs,
    /// Number of independent optimization runs
    #[arg(long, default_value_t = 20)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (runs.csv, manifest.json)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &RunsArgs) -> CliResult<()> {
    let device = resolve_device(&args.device)?;
    let target = parse_target(&args.target)?;
    let weights = args.weights.to_weights()?;
    let evo_config = args.evo.to_config(args.seed)?;

    let rows =
        run_repeated_optimizations(args.runs, &device, &evo_config, &weights, &target, args.seed)?;

    let manifest = RunManifest::new(
        "runs",
        Some(args.seed),
        serde_json::json!({
            "device": device,
            "target": target,
            "weights": weights,
            "evo": evo_config,
            "runs": args.runs,
        }),
        vec!["runs.csv"],
    );
    let files = [
        OutputFile { name: "runs.csv", contents: runs_csv(device.name(), &rows) },
        OutputFile { name: "manifest.json", contents: to_pretty_json(&manifest) },
    ];
    write_outputs(&args.out, &files)?;

    let best = rows
        .iter()
        .min_by(|a, b| a.result.best_fitness.partial_cmp(&b.result.best_fitness).unwrap())
        .expect("runs >= 1");
    println!(
        "runs[{}]: {} runs, best run {} with fitness={} kl_nats={} energy_fj={}",
        device.name(),
        args.runs,
        best.run,
        sig6(best.result.best_fitness),
        sig6(best.result.exact_kl_nats),
        sig6(best.result.exact_energy_fj),
    );
    println!("wrote runs.csv, manifest.json to {}", args.out.display());
    Ok(())
}
