//! Subcommand implementations.

pub mod evaluate;
pub mod optimize;
pub mod plot_cmd;
pub mod runs;
pub mod sample;
pub mod solve;
pub mod sweep;
pub mod weight_sweep;

use clap::Args;
use coincirc::{EvoConfig, FitnessWeights};

use crate::common::{CliError, CliResult};

pub const DEFAULT_TARGET: &str =
    "0.5,0.16666666666666666,0.16666666666666666,0.16666666666666666";

/// Objective-weight flags shared by the optimizing subcommands.
#[derive(Debug, Args)]
pub struct WeightArgs {
    /// KL-divergence objective weight
    #[arg(long, default_value_t = 7500.0)]
    pub w1: f64,
    /// Coin-fairness objective weight
    #[arg(long, default_value_t = 0.005)]
    pub w2: f64,
    /// Energy objective weight (energy in femtojoules)
    #[arg(long, default_value_t = 0.5)]
    pub w3: f64,
}

impl WeightArgs {
    pub fn to_weights(&self) -> CliResult<FitnessWeights> {
        FitnessWeights::new(self.w1, self.w2, self.w3)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Evolutionary-algorithm flags shared by the optimizing subcommands.
#[derive(Debug, Args)]
pub struct EvoArgs {
    #[arg(long, default_value_t = 100)]
    pub population: usize,
    /// Breeding steps after the initial random population
    #[arg(long, default_value_t = 1000)]
    pub generations: usize,
    #[arg(long, default_value_t = 2)]
    pub tournament: usize,
    #[arg(long, default_value_t = 0.9)]
    pub crossover_prob: f64,
    /// Per-gene mutation probability (0.2 = one expected mutation per genome)
    #[arg(long, default_value_t = 0.2)]
    pub mutation_rate: f64,
    #[arg(long, default_value_t = 0.001)]
    pub mutation_sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub elitism: usize,
}

impl EvoArgs {
    pub fn to_config(&self, seed: u64) -> CliResult<EvoConfig> {
        let config = EvoConfig {
            population_size: self.population,
            generations: self.generations,
            tournament_size: self.tournament,
            crossover_probability: self.crossover_prob,
            per_gene_mutation_rate: self.mutation_rate,
            mutation_sigma: self.mutation_sigma,
            elitism_count: self.elitism,
            seed,
        };
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }
}
