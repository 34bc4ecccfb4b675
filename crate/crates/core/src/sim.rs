//! Monte Carlo simulation of the hidden-dependence circuit.
//!
//! One sample is three device flips in a fixed order: the hidden selector
//! coin (heads probability w) picks coin set 1 or 2, then the chosen set's
//! two coins are flipped. The two visible faces encode the outcome
//! (HH, HT, TH, TT) → (0, 1, 2, 3). Energy is totaled from the per-flip
//! records; whether the selector flip's energy counts is configurable and
//! recorded in all output metadata.

use rand::Rng;
use serde::Serialize;

use crate::device::DeviceSpec;
use crate::dist::{kl_core, CircuitParams, Distribution4};
use crate::error::{Error, Result};

/// A circuit bound to a device, ready to sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HiddenDependenceCircuit {
    pub params: CircuitParams,
    pub device: DeviceSpec,
    /// Count the selector flip's energy in sample totals. On for physical
    /// accounting; the optimizer's energy objective excludes the selector
    /// regardless of this flag.
    pub count_hidden_energy: bool,
}

/// Outcome tallies and energy total from a batch of samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    counts: [u64; 4],
    total: u64,
    total_energy_fj: f64,
}

impl HiddenDependenceCircuit {
    pub fn new(params: CircuitParams, device: DeviceSpec, count_hidden_energy: bool) -> Self {
        Self { params, device, count_hidden_energy }
    }

    /// Draw one outcome; returns (outcome in 0..4, energy in fJ).
    ///
    /// Flip order is fixed (selector, coin 1, coin 2) so traces are
    /// replayable from the stream alone.
    pub fn sample_once(&self, rng: &mut impl Rng) -> (u8, f64) {
        let hidden = self.device.flip(self.params.w(), rng);
        let (p, q) = if hidden.heads { self.params.set1() } else { self.params.set2() };
        let c1 = self.device.flip(p, rng);
        let c2 = self.device.flip(q, rng);
        let outcome = (!c1.heads as u8) * 2 + (!c2.heads as u8);
        let mut energy = c1.energy_fj + c2.energy_fj;
        if self.count_hidden_energy {
            energy += hidden.energy_fj;
        }
        (outcome, energy)
    }

    /// Aggregate `n` samples into an [`EmpiricalDistribution`].
    pub fn sample_n(&self, n: u64, rng: &mut impl Rng) -> Result<EmpiricalDistribution> {
        if n == 0 {
            return Err(Error::ZeroCount);
        }
        let mut counts = [0u64; 4];
        let mut total_energy_fj = 0.0;
        for _ in 0..n {
            let (outcome, energy) = self.sample_once(rng);
            counts[outcome as usize] += 1;
            total_energy_fj += energy;
        }
        Ok(EmpiricalDistribution { counts, total: n, total_energy_fj })
    }
}

impl EmpiricalDistribution {
    pub fn from_parts(counts: [u64; 4], total_energy_fj: f64) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptySample);
        }
        if !(total_energy_fj.is_finite() && total_energy_fj >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "total_energy_fj = {total_energy_fj} must be non-negative"
            )));
        }
        Ok(Self { counts, total, total_energy_fj })
    }

    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn total_energy_fj(&self) -> f64 {
        self.total_energy_fj
    }

    pub fn frequencies(&self) -> [f64; 4] {
        self.counts.map(|c| c as f64 / self.total as f64)
    }

    /// Entrywise count and energy addition; associative and commutative.
    pub fn merge(&self, other: &Self) -> Self {
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        Self {
            counts,
            total: self.total + other.total,
            total_energy_fj: self.total_energy_fj + other.total_energy_fj,
        }
    }
}

/// KL divergence of the empirical frequencies from `target`, in nats.
///
/// Empty bins contribute zero (the 0·ln 0 convention); the target must be
/// strictly positive.
pub fn empirical_kl(emp: &EmpiricalDistribution, target: &Distribution4) -> Result<f64> {
    if let Some(index) = target.probs().iter().position(|&x| x == 0.0) {
        return Err(Error::TargetHasZeroEntry { index });
    }
    if emp.total == 0 {
        return Err(Error::EmptySample);
    }
    Ok(kl_core(&emp.frequencies(), &target.probs()))
}
