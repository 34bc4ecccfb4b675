//! `sample` — draw n outcomes from a circuit on a device; writes a JSON
//! report, a plot-ready histogram CSV, and a manifest.

use std::path::PathBuf;

use clap::Args;
use coincirc::harness::EXPERIMENT_SINGLE_SAMPLE;
use coincirc::{
    empirical_kl, exact_outcome_distribution, kl_divergence, rng, CircuitParams, DeviceSpec,
    Distribution4, HiddenDependenceCircuit,
};
use serde::Serialize;

use crate::commands::DEFAULT_TARGET;
use crate::common::{
    parse_params, parse_target, resolve_device, sig6, to_pretty_json, write_outputs, CliResult,
    OutputFile,
};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Circuit parameters as w,p1,q1,p2,q2
    #[arg(long)]
    params: String,
    /// Built-in device name or path to a JSON config
    #[arg(long, default_value = "td")]
    device: String,
    /// Target distribution as four comma-separated probabilities
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    /// Number of samples to draw
    #[arg(long, default_value_t = 2000)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include the hidden selector flip's energy in totals
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    count_hidden_energy: bool,
    /// Output directory (sample.json, sample.csv, manifest.json)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct SampleReport {
    device: DeviceSpec,
    params: CircuitParams,
    target: Distribution4,
    n: u64,
    seed: u64,
    count_hidden_energy: bool,
    counts: [u64; 4],
    frequencies: [f64; 4],
    empirical_kl_nats: f64,
    total_energy_fj: f64,
    exact_v: Distribution4,
    exact_kl_nats: f64,
}

pub fn run(args: &SampleArgs) -> CliResult<()> {
    let params = parse_params(&args.params)?;
    let device = resolve_device(&args.device)?;
    let target = parse_target(&args.target)?;

    let circuit = HiddenDependenceCircuit::new(params, device.clone(), args.count_hidden_energy);
    let mut stream = rng::stream(args.seed, &[EXPERIMENT_SINGLE_SAMPLE]);
    let emp = circuit.sample_n(args.n, &mut stream)?;
    let exact_v = exact_outcome_distribution(&params);

    let report = SampleReport {
        device,
        params,
        target,
        n: args.n,
        seed: args.seed,
        count_hidden_energy: args.count_hidden_energy,
        counts: emp.counts(),
        frequencies: emp.frequencies(),
        empirical_kl_nats: empirical_kl(&emp, &target)?,
        total_energy_fj: emp.total_energy_fj(),
        exact_v,
        exact_kl_nats: kl_divergence(&exact_v, &target)?,
    };

    let mut csv = String::from("outcome,count,frequency,target\n");
    for i in 0..4 {
        csv.push_str(&format!(
            "{i},{},{},{}\n",
            report.counts[i], report.frequencies[i], target.get(i)
        ));
    }

    let manifest = RunManifest::new(
        "sample",
        Some(args.seed),
        serde_json::json!({
            "device": report.device,
            "params": report.params,
            "target": target,
            "n": args.n,
            "count_hidden_energy": args.count_hidden_energy,
        }),
        vec!["sample.json", "sample.csv"],
    );
    let files = [
        OutputFile { name: "sample.json", contents: to_pretty_json(&report) },
        OutputFile { name: "sample.csv", contents: csv },
        OutputFile { name: "manifest.json", contents: to_pretty_json(&manifest) },
    ];
    write_outputs(&args.out, &files)?;

    println!(
        "sample[{}]: n={} empirical_kl_nats={} total_energy_fj={} counts={:?}",
        report.device.name(),
        args.n,
        sig6(report.empirical_kl_nats),
        sig6(report.total_energy_fj),
        report.counts,
    );
    println!("wrote sample.json, sample.csv, manifest.json to {}", args.out.display());
    Ok(())
}
