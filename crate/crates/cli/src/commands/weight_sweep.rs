//! `weight-sweep` — vary one objective weight at a time around a base point,
//! evolving repeatedly per setting, and record best KL and energy per cell.

use std::path::PathBuf;

use clap::Args;
use coincirc::harness::{best_per_cell, run_weight_sweep, weight_sweep_csv};
use coincirc::WeightGrids;

use crate::commands::{EvoArgs, WeightArgs, DEFAULT_TARGET};
use crate::common::{
    parse_grid, parse_target, resolve_device, sig6, to_pretty_json, write_outputs, CliResult,
    OutputFile,
};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct WeightSweepArgs {
    /// Built-in device name or path to a JSON config
    #[arg(long, default_value = "mtj_she")]
    device: String,
    /// Target distribution as four comma-separated probabilities
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    /// Base point the unvaried weights are held at
    #[command(flatten)]
    weights: WeightArgs,
    /// Grid for w1; defaults to 7 log-spaced points over [w1/100, w1·100]
    #[arg(long)]
    w1_grid: Option<String>,
    /// Grid for w2; same default shape around w2
    #[arg(long)]
    w2_grid: Option<String>,
    /// Grid for w3; same default shape around w3
    #[arg(long)]
    w3_grid: Option<String>,
    /// Evolve repetitions per grid cell (best is reported per cell)
    #[arg(long, default_value_t = 3)]
    reps: u64,
    #[command(flatten)]
    evo: EvoArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (weight_sweep.csv, manifest.json)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &WeightSweepArgs) -> CliResult<()> {
    let device = resolve_device(&args.device)?;
    let target = parse_target(&args.target)?;
    let base = args.weights.to_weights()?;
    let evo_config = args.evo.to_config(args.seed)?;

    let defaults = WeightGrids::log_spaced_around(&base, 7);
    let grids = WeightGrids {
        w1: match &args.w1_grid {
            Some(s) => parse_grid(s, "--w1-grid")?,
            None => defaults.w1,
        },
        w2: match &args.w2_grid {
            Some(s) => parse_grid(s, "--w2-grid")?,
            None => defaults.w2,
        },
        w3: match &args.w3_grid {
            Some(s) => parse_grid(s, "--w3-grid")?,
            None => defaults.w3,
        },
    };

    let rows = run_weight_sweep(&grids, &device, &evo_config, &base, &target, args.reps, args.seed)?;

    let manifest = RunManifest::new(
        "weight-sweep",
        Some(args.seed),
        serde_json::json!({
            "device": device,
            "target": target,
            "base_weights": base,
            "grids": grids,
            "reps": args.reps,
            "evo": evo_config,
        }),
        vec!["weight_sweep.csv"],
    );
    let files = [
        OutputFile { name: "weight_sweep.csv", contents: weight_sweep_csv(&rows) },
        OutputFile { name: "manifest.json", contents: to_pretty_json(&manifest) },
    ];
    write_outputs(&args.out, &files)?;

    for axis in ["omega1", "omega2", "omega3"] {
        let cells = best_per_cell(&rows, axis);
        if let (Some(first), Some(last)) = (cells.first(), cells.last()) {
            println!(
                "weight-sweep[{axis}]: best_kl {} -> {} and best_energy_fj {} -> {} across the grid",
                sig6(first.1),
                sig6(last.1),
                sig6(first.2),
                sig6(last.2),
            );
        }
    }
    println!("wrote weight_sweep.csv, manifest.json to {}", args.out.display());
    Ok(())
}
