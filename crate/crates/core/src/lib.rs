//! Codesign toolkit for probabilistic coin-flip circuits.
//!
//! The problem: sample a four-outcome target distribution by flipping coins
//! realized on stochastic devices, at the lowest possible device energy.
//! Two independent coins only reach product-form distributions, so targets
//! like the skewed die (1/2, 1/6, 1/6, 1/6) need a hidden-dependence
//! circuit: an unobserved selector coin chooses which of two coin sets gets
//! flipped, correlating the visible faces.
//!
//! The crate provides:
//!
//! - [`dist`] — exact circuit analytics: outcome distributions, KL
//!   divergence, solvability of the direct two-coin system, fairness.
//! - [`device`] — parametric per-flip energy models for the supported
//!   stochastic devices, loadable from JSON documents.
//! - [`sim`] — seeded Monte Carlo sampling of circuits with energy
//!   accounting.
//! - [`evo`] — an evolutionary optimizer over the five circuit parameters
//!   with a weighted KL/fairness/energy objective.
//! - [`harness`] — reproducible experiment drivers: sample-size sweeps,
//!   objective-weight sweeps, repeated optimization runs.
//! - [`rng`] — the fixed ChaCha8/SplitMix64 substream scheme all of the
//!   above draw from.
//! - [`presets`] — the built-in devices (`td`, `mtj_she`, `mtj_vcma`), the
//!   default die target, and reference optimized circuits.

pub mod device;
pub mod dist;
pub mod error;
pub mod evo;
pub mod harness;
pub mod presets;
pub mod rng;
pub mod sim;

pub use device::{parse_device_config, DeviceSpec, EnergyModel, FlipRecord};
pub use dist::{
    exact_outcome_distribution, fairness_penalty, kl_divergence, solve_two_coins,
    two_coin_product, two_coin_residual, CircuitParams, CoinPair, Distribution4,
};
pub use error::{Error, Result};
pub use evo::{
    circuit_energy_fj, evolve, fitness, fitness_parts, gaussian_mutate, tournament_select,
    uniform_crossover, EvoConfig, FitnessParts, FitnessWeights, GenerationRecord, Genome,
    OptimizationResult,
};
pub use harness::{
    run_repeated_optimizations, run_sample_sweep, run_weight_sweep, RunRow, SweepConfig,
    SweepResult, SweepRow, WeightGrids, WeightSweepRow,
};
pub use sim::{empirical_kl, EmpiricalDistribution, HiddenDependenceCircuit};
