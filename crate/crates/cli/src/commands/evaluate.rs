//! `evaluate` — exact analytics of one circuit: outcome distribution, KL,
//! fairness, energy, and the recombined fitness, printed as JSON.

use clap::Args;
use coincirc::{
    exact_outcome_distribution, fitness_parts, CircuitParams, DeviceSpec, Distribution4,
    FitnessWeights, Genome,
};
use serde::Serialize;

use crate::common::{parse_params, parse_target, resolve_device, to_pretty_json, CliResult};
use crate::commands::{WeightArgs, DEFAULT_TARGET};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Circuit parameters as w,p1,q1,p2,q2
    #[arg(long)]
    params: String,
    /// Built-in device name or path to a JSON config
    #[arg(long, default_value = "td")]
    device: String,
    /// Target distribution as four comma-separated probabilities
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Serialize)]
struct EvaluateReport {
    device: DeviceSpec,
    params: CircuitParams,
    target: Distribution4,
    weights: FitnessWeights,
    v: Distribution4,
    kl_nats: f64,
    fairness: f64,
    energy_fj: f64,
    fitness: f64,
}

pub fn run(args: &EvaluateArgs) -> CliResult<()> {
    let params = parse_params(&args.params)?;
    let device = resolve_device(&args.device)?;
    let target = parse_target(&args.target)?;
    let weights = args.weights.to_weights()?;

    let parts = fitness_parts(&Genome::from_params(&params), &device, &target)?;
    let report = EvaluateReport {
        device,
        params,
        target,
        weights,
        v: exact_outcome_distribution(&params),
        kl_nats: parts.kl_nats,
        fairness: parts.fairness,
        energy_fj: parts.energy_fj,
        fitness: parts.weighted_total(&weights),
    };
    print!("{}", to_pretty_json(&report));
    Ok(())
}
