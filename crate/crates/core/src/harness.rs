//! Experiment orchestration: sample-size sweeps, objective-weight sweeps,
//! and repeated optimization runs, with CSV-serializable results.
//!
//! Every cell of every experiment draws from its own substream, derived
//! hierarchically as master seed → experiment tag → cell → trial. Cells are
//! therefore independent of execution order and can run concurrently; output
//! rows are always assembled in deterministic order, and re-running a single
//! cell with its recorded seed reproduces its row.

use rand::SeedableRng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::device::DeviceSpec;
use crate::dist::{CircuitParams, Distribution4};
use crate::error::{Error, Result};
use crate::evo::{evolve, EvoConfig, FitnessWeights, OptimizationResult};
use crate::rng;
use crate::sim::{empirical_kl, HiddenDependenceCircuit};

/// Substream tags, one per experiment family.
pub const EXPERIMENT_SAMPLE_SWEEP: u64 = 1;
pub const EXPERIMENT_WEIGHT_SWEEP: u64 = 2;
pub const EXPERIMENT_REPEATED_RUNS: u64 = 3;
pub const EXPERIMENT_SINGLE_SAMPLE: u64 = 4;

/// Configuration of a sample-size sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub sample_sizes: Vec<u64>,
    pub trials_per_size: u64,
    pub master_seed: u64,
    pub device: DeviceSpec,
    pub params: CircuitParams,
    pub target: Distribution4,
    pub count_hidden_energy: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidConfig("sample_sizes must be non-empty".into()));
        }
        if !self.sample_sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "sample_sizes must be strictly increasing".into(),
            ));
        }
        if self.sample_sizes[0] == 0 {
            return Err(Error::InvalidConfig("sample sizes must be at least 1".into()));
        }
        if self.trials_per_size == 0 {
            return Err(Error::InvalidConfig("trials_per_size must be at least 1".into()));
        }
        if !self.target.strictly_positive() {
            let index = self.target.probs().iter().position(|&x| x == 0.0).unwrap();
            return Err(Error::TargetHasZeroEntry { index });
        }
        Ok(())
    }
}

/// One (sample size, trial) cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub sample_size: u64,
    pub trial: u64,
    pub substream_seed: u64,
    pub kl_nats: f64,
    pub total_energy_fj: f64,
    pub counts: [u64; 4],
}

/// All rows of a sweep, in (size, trial) order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub device: String,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "device,sample_size,trial,substream_seed,kl_nats,total_energy_fj,count0,count1,count2,count3\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.device,
                r.sample_size,
                r.trial,
                r.substream_seed,
                r.kl_nats,
                r.total_energy_fj,
                r.counts[0],
                r.counts[1],
                r.counts[2],
                r.counts[3]
            ));
        }
        out
    }

    /// Trial-mean empirical KL per sample size, in size order.
    pub fn mean_kl_by_size(&self) -> Vec<(u64, f64)> {
        mean_by_size(&self.rows, |r| r.kl_nats)
    }

    /// Trial-mean total energy per sample size, in size order.
    pub fn mean_energy_by_size(&self) -> Vec<(u64, f64)> {
        mean_by_size(&self.rows, |r| r.total_energy_fj)
    }
}

fn mean_by_size(rows: &[SweepRow], value: impl Fn(&SweepRow) -> f64) -> Vec<(u64, f64)> {
    let mut out: Vec<(u64, f64, u64)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|(size, _, _)| *size == r.sample_size) {
            Some((_, sum, n)) => {
                *sum += value(r);
                *n += 1;
            }
            None => out.push((r.sample_size, value(r), 1)),
        }
    }
    out.into_iter().map(|(size, sum, n)| (size, sum / n as f64)).collect()
}

/// Run a single (size index, trial) cell of a sweep.
pub fn sweep_cell(config: &SweepConfig, size_index: usize, trial: u64) -> Result<SweepRow> {
    let sample_size = config.sample_sizes[size_index];
    let substream_seed = rng::derive_seed(
        config.master_seed,
        &[EXPERIMENT_SAMPLE_SWEEP, size_index as u64, trial],
    );
    let circuit = HiddenDependenceCircuit::new(
        config.params,
        config.device.clone(),
        config.count_hidden_energy,
    );
    let mut stream = rng::Stream::seed_from_u64(substream_seed);
    let emp = circuit.sample_n(sample_size, &mut stream)?;
    Ok(SweepRow {
        sample_size,
        trial,
        substream_seed,
        kl_nats: empirical_kl(&emp, &config.target)?,
        total_energy_fj: emp.total_energy_fj(),
        counts: emp.counts(),
    })
}

/// Run the full sample-size sweep. Cells execute in parallel; the row order
/// is (size, trial) regardless of scheduling.
pub fn run_sample_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let cells: Vec<(usize, u64)> = (0..config.sample_sizes.len())
        .flat_map(|s| (0..config.trials_per_size).map(move |t| (s, t)))
        .collect();
    let rows: Result<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(size_index, trial)| sweep_cell(config, size_index, trial))
        .collect();
    Ok(SweepResult { device: config.device.name().to_string(), rows: rows? })
}

/// Grids for the objective-weight sweep, one axis varied at a time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightGrids {
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub w3: Vec<f64>,
}

impl WeightGrids {
    /// Log-spaced default: 7 points per axis from ×1/100 to ×100 around the base.
    pub fn log_spaced_around(base: &FitnessWeights, points: usize) -> Self {
        let axis = |center: f64| -> Vec<f64> {
            (0..points)
                .map(|i| {
                    let exp = -2.0 + 4.0 * i as f64 / (points - 1) as f64;
                    center * 10f64.powf(exp)
                })
                .collect()
        };
        Self { w1: axis(base.w1()), w2: axis(base.w2()), w3: axis(base.w3()) }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, grid) in [("w1", &self.w1), ("w2", &self.w2), ("w3", &self.w3)] {
            if grid.is_empty() {
                return Err(Error::InvalidConfig(format!("{name} grid must be non-empty")));
            }
            if grid.iter().any(|&v| !(v.is_finite() && v >= 0.0)) {
                return Err(Error::InvalidConfig(format!(
                    "{name} grid entries must be non-negative"
                )));
            }
        }
        Ok(())
    }
}

/// One repetition of one weight-sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSweepRow {
    /// Which axis was varied: "omega1", "omega2", or "omega3".
    pub varied_omega: String,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub rep: u64,
    pub best_kl_nats: f64,
    pub best_energy_fj: f64,
}

pub fn weight_sweep_csv(rows: &[WeightSweepRow]) -> String {
    let mut out =
        String::from("varied_omega,omega1,omega2,omega3,rep,best_kl_nats,best_energy_fj\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.varied_omega, r.omega1, r.omega2, r.omega3, r.rep, r.best_kl_nats, r.best_energy_fj
        ));
    }
    out
}

/// Repetitions of one varied axis reduced to per-cell minima:
/// (varied weight value, min best_kl over reps, min best_energy over reps),
/// in grid order. Taking the best repetition tames optimizer noise in
/// trend reads.
pub fn best_per_cell(rows: &[WeightSweepRow], axis: &str) -> Vec<(f64, f64, f64)> {
    let axis_value = |r: &WeightSweepRow| match axis {
        "omega1" => r.omega1,
        "omega2" => r.omega2,
        "omega3" => r.omega3,
        _ => panic!("unknown axis {axis}"),
    };
    let mut cells: Vec<(f64, f64, f64)> = Vec::new();
    for r in rows.iter().filter(|r| r.varied_omega == axis) {
        let v = axis_value(r);
        match cells.iter_mut().find(|(cv, _, _)| *cv == v) {
            Some(cell) => {
                cell.1 = cell.1.min(r.best_kl_nats);
                cell.2 = cell.2.min(r.best_energy_fj);
            }
            None => cells.push((v, r.best_kl_nats, r.best_energy_fj)),
        }
    }
    cells
}

/// Vary one objective weight at a time around `base`, evolving `reps` times
/// per setting with derived seeds, and record best exact KL and energy.
pub fn run_weight_sweep(
    grids: &WeightGrids,
    device: &DeviceSpec,
    evo_config: &EvoConfig,
    base: &FitnessWeights,
    target: &Distribution4,
    reps: u64,
    master_seed: u64,
) -> Result<Vec<WeightSweepRow>> {
    grids.validate()?;
    evo_config.validate()?;
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }

    struct Cell {
        axis: usize,
        axis_name: &'static str,
        point: usize,
        weights: FitnessWeights,
        rep: u64,
    }

    let mut cells = Vec::new();
    let axes: [(&'static str, &Vec<f64>); 3] =
        [("omega1", &grids.w1), ("omega2", &grids.w2), ("omega3", &grids.w3)];
    for (axis, (axis_name, grid)) in axes.into_iter().enumerate() {
        for (point, &value) in grid.iter().enumerate() {
            let weights = match axis {
                0 => FitnessWeights::new(value, base.w2(), base.w3()),
                1 => FitnessWeights::new(base.w1(), value, base.w3()),
                _ => FitnessWeights::new(base.w1(), base.w2(), value),
            }?;
            for rep in 0..reps {
                cells.push(Cell { axis, axis_name, point, weights, rep });
            }
        }
    }

    let rows: Result<Vec<WeightSweepRow>> = cells
        .par_iter()
        .map(|cell| {
            let seed = rng::derive_seed(
                master_seed,
                &[EXPERIMENT_WEIGHT_SWEEP, cell.axis as u64, cell.point as u64, cell.rep],
            );
            let result = evolve(&evo_config.with_seed(seed), device, &cell.weights, target)?;
            Ok(WeightSweepRow {
                varied_omega: cell.axis_name.to_string(),
                omega1: cell.weights.w1(),
                omega2: cell.weights.w2(),
                omega3: cell.weights.w3(),
                rep: cell.rep,
                best_kl_nats: result.exact_kl_nats,
                best_energy_fj: result.exact_energy_fj,
            })
        })
        .collect();
    rows
}

/// One optimization run's best genome and metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub run: u64,
    pub seed: u64,
    pub result: OptimizationResult,
}

pub fn runs_csv(device: &str, rows: &[RunRow]) -> String {
    let mut out = String::from("device,run,seed,w,p1,q1,p2,q2,kl_nats,energy_fj,fitness\n");
    for r in rows {
        let [w, p1, q1, p2, q2] = r.result.best_genome.genes();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            device,
            r.run,
            r.seed,
            w,
            p1,
            q1,
            p2,
            q2,
            r.result.exact_kl_nats,
            r.result.exact_energy_fj,
            r.result.best_fitness
        ));
    }
    out
}

/// `n_runs` independent evolve calls with seeds derived from
/// (master seed, run index).
pub fn run_repeated_optimizations(
    n_runs: u64,
    device: &DeviceSpec,
    evo_config: &EvoConfig,
    weights: &FitnessWeights,
    target: &Distribution4,
    master_seed: u64,
) -> Result<Vec<RunRow>> {
    if n_runs == 0 {
        return Err(Error::InvalidConfig("n_runs must be at least 1".into()));
    }
    evo_config.validate()?;
    (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let seed = rng::derive_seed(master_seed, &[EXPERIMENT_REPEATED_RUNS, run]);
            let result = evolve(&evo_config.with_seed(seed), device, weights, target)?;
            Ok(RunRow { run, seed, result })
        })
        .collect()
}
