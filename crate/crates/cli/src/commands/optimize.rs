//! `optimize` — one evolutionary run; writes the best-result document,
//! the per-generation history CSV, and a manifest.

use std::path::PathBuf;

use clap::Args;
use coincirc::{evolve, DeviceSpec, Distribution4, EvoConfig, FitnessWeights, Genome};
use serde::Serialize;

use crate::commands::{EvoArgs, WeightArgs, DEFAULT_TARGET};
use crate::common::{parse_target, resolve_device, sig6, to_pretty_json, write_outputs, CliResult, OutputFile};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct OptimizeArgs {
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
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (best.json, history.csv, manifest.json)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct BestResultDoc {
    device: DeviceSpec,
    weights: FitnessWeights,
    config: EvoConfig,
    seed: u64,
    best: Genome,
    v: Distribution4,
    kl_nats: f64,
    fairness: f64,
    energy_fj: f64,
    fitness: f64,
}

pub fn run(args: &OptimizeArgs) -> CliResult<()> {
    let device = resolve_device(&args.device)?;
    let target = parse_target(&args.target)?;
    let weights = args.weights.to_weights()?;
    let config = args.evo.to_config(args.seed)?;

    let result = evolve(&config, &device, &weights, &target)?;
    let doc = BestResultDoc {
        device: device.clone(),
        weights,
        config,
        seed: args.seed,
        best: result.best_genome,
        v: coincirc::exact_outcome_distribution(&result.best_genome.to_params()),
        kl_nats: result.exact_kl_nats,
        fairness: result.exact_fairness,
        energy_fj: result.exact_energy_fj,
        fitness: result.best_fitness,
    };

    let manifest = RunManifest::new(
        "optimize",
        Some(args.seed),
        serde_json::json!({
            "device": device,
            "target": target,
            "weights": weights,
            "evo": config,
        }),
        vec!["best.json", "history.csv"],
    );
    let files = [
        OutputFile { name: "best.json", contents: to_pretty_json(&doc) },
        OutputFile { name: "history.csv", contents: result.history_csv() },
        OutputFile { name: "manifest.json", contents: to_pretty_json(&manifest) },
    ];
    write_outputs(&args.out, &files)?;

    println!(
        "optimize[{}]: fitness={} kl_nats={} fairness={} energy_fj={}",
        device.name(),
        sig6(result.best_fitness),
        sig6(result.exact_kl_nats),
        sig6(result.exact_fairness),
        sig6(result.exact_energy_fj),
    );
    println!("wrote best.json, history.csv, manifest.json to {}", args.out.display());
    Ok(())
}
