//! `sweep` — the sample-size sweep: (sizes × trials) sampling cells with
//! empirical KL and energy per cell, written as CSV.

use std::path::PathBuf;

use clap::Args;
use coincirc::{run_sample_sweep, SweepConfig};

use crate::commands::DEFAULT_TARGET;
use crate::common::{
    parse_params, parse_sizes, parse_target, resolve_device, sig6, to_pretty_json, write_outputs,
    CliResult, OutputFile,
};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Circuit parameters as w,p1,q1,p2,q2
    #[arg(long)]
    params: String,
    /// Built-in device name or path to a JSON config
    #[arg(long, default_value = "td")]
    device: String,
    /// Target distribution as four comma-separated probabilities
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    /// Comma-separated, strictly increasing sample sizes
    #[arg(long, default_value = "10,50,100,200,500,1000,1500,2000")]
    sizes: String,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include the hidden selector flip's energy in totals
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    count_hidden_energy: bool,
    /// Output directory (sweep.csv, manifest.json)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let config = SweepConfig {
        sample_sizes: parse_sizes(&args.sizes)?,
        trials_per_size: args.trials,
        master_seed: args.seed,
        device: resolve_device(&args.device)?,
        params: parse_params(&args.params)?,
        target: parse_target(&args.target)?,
        count_hidden_energy: args.count_hidden_energy,
    };
    config.validate()?;

    let result = run_sample_sweep(&config)?;

    let manifest = RunManifest::new(
        "sweep",
        Some(args.seed),
        serde_json::to_value(&config).expect("config serializes"),
        vec!["sweep.csv"],
    );
    let files = [
        OutputFile { name: "sweep.csv", contents: result.to_csv() },
        OutputFile { name: "manifest.json", contents: to_pretty_json(&manifest) },
    ];
    write_outputs(&args.out, &files)?;

    let means = result.mean_kl_by_size();
    if let (Some(first), Some(last)) = (means.first(), means.last()) {
        println!(
            "sweep[{}]: mean_kl_nats @n={} is {}, @n={} is {}",
            config.device.name(),
            first.0,
            sig6(first.1),
            last.0,
            sig6(last.1),
        );
    }
    println!("wrote sweep.csv, manifest.json to {}", args.out.display());
    Ok(())
}
