//! Exact analytics for coin circuits.
//!
//! A circuit output is identified with two coin faces: outcome 0 is HH,
//! 1 is HT, 2 is TH, and 3 is TT. Two independent coins can only realize
//! product-form distributions over those four outcomes; [`solve_two_coins`]
//! decides that case. The hidden-dependence circuit mixes two coin sets
//! through an unobserved selector coin and covers a strictly larger family,
//! computed exactly by [`exact_outcome_distribution`].

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_probability, Error, Result};

/// Absolute tolerance on the entry sum accepted by [`Distribution4::new`].
pub const DIST_SUM_TOLERANCE: f64 = 1e-9;

/// A probability distribution over the four outcomes {0, 1, 2, 3}.
///
/// Entries are validated to lie in [0, 1] and to sum to 1 within
/// [`DIST_SUM_TOLERANCE`]; accepted inputs are renormalized exactly, so the
/// stored vector absorbs rounding while genuinely malformed input is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distribution4 {
    probs: [f64; 4],
}

impl Distribution4 {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        for (i, &x) in probs.iter().enumerate() {
            if !(x.is_finite() && (0.0..=1.0).contains(&x)) {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} = {x} is not in [0, 1]"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DIST_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, more than {DIST_SUM_TOLERANCE} away from 1"
            )));
        }
        Ok(Self { probs: probs.map(|x| x / sum) })
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn get(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    /// True when every outcome has nonzero mass, the precondition for being
    /// a KL-divergence target.
    pub fn strictly_positive(&self) -> bool {
        self.probs.iter().all(|&x| x > 0.0)
    }
}

impl std::ops::Index<usize> for Distribution4 {
    type Output = f64;
    fn index(&self, outcome: usize) -> &f64 {
        &self.probs[outcome]
    }
}

// Serializes as a bare 4-element array in every format.
impl Serialize for Distribution4 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.probs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Distribution4 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let probs = <[f64; 4]>::deserialize(deserializer)?;
        Distribution4::new(probs).map_err(D::Error::custom)
    }
}

/// Heads probabilities (p, q) for a pair of independent coins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoinPair {
    p: f64,
    q: f64,
}

impl CoinPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Ok(Self { p: check_probability("p", p)?, q: check_probability("q", q)? })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// The five probabilities defining a hidden-dependence circuit: a selector
/// coin with heads probability `w` choosing set 1, whose coins have heads
/// probabilities (p1, q1), over set 2 with (p2, q2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitParams {
    w: f64,
    p1: f64,
    q1: f64,
    p2: f64,
    q2: f64,
}

impl CircuitParams {
    pub fn new(w: f64, p1: f64, q1: f64, p2: f64, q2: f64) -> Result<Self> {
        Ok(Self {
            w: check_probability("w", w)?,
            p1: check_probability("p1", p1)?,
            q1: check_probability("q1", q1)?,
            p2: check_probability("p2", p2)?,
            q2: check_probability("q2", q2)?,
        })
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn set1(&self) -> (f64, f64) {
        (self.p1, self.q1)
    }

    pub fn set2(&self) -> (f64, f64) {
        (self.p2, self.q2)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn q2(&self) -> f64 {
        self.q2
    }

    /// Parameters as the flat vector (w, p1, q1, p2, q2).
    pub fn as_array(&self) -> [f64; 5] {
        [self.w, self.p1, self.q1, self.p2, self.q2]
    }
}

/// Joint outcome distribution of two independent coins.
pub fn two_coin_product(pair: &CoinPair) -> Distribution4 {
    let (p, q) = (pair.p, pair.q);
    Distribution4::new([p * q, p * (1.0 - q), (1.0 - p) * q, (1.0 - p) * (1.0 - q)])
        .expect("product of probabilities is a distribution")
}

/// Recover independent coin probabilities reproducing `target`, if they exist.
///
/// The candidate is always p = t0 + t1, q = t0 + t2 (the marginal heads
/// probabilities). It is accepted only when the product-form consistency
/// condition |t0·t3 − t1·t2| ≤ tol holds and the reconstructed product
/// matches `target` within `tol` per entry. `None` means the target has no
/// independent two-coin representation at this tolerance.
pub fn solve_two_coins(target: &Distribution4, tol: f64) -> Option<CoinPair> {
    assert!(tol > 0.0, "tolerance must be positive");
    if two_coin_residual(target) > tol {
        return None;
    }
    let t = target.probs();
    let pair = CoinPair::new((t[0] + t[1]).clamp(0.0, 1.0), (t[0] + t[2]).clamp(0.0, 1.0))
        .expect("clamped sums are probabilities");
    let rebuilt = two_coin_product(&pair).probs();
    let max_err = rebuilt
        .iter()
        .zip(t.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    (max_err <= tol).then_some(pair)
}

/// Residual of the product-form consistency condition, |t0·t3 − t1·t2|.
pub fn two_coin_residual(target: &Distribution4) -> f64 {
    let t = target.probs();
    (t[0] * t[3] - t[1] * t[2]).abs()
}

/// Exact outcome distribution of the hidden-dependence circuit.
///
/// Outcome i gets probability w·P(faces | set 1) + (1−w)·P(faces | set 2):
///
/// ```text
/// v(0) = w p1 q1           + (1−w) p2 q2
/// v(1) = w p1 (1−q1)       + (1−w) p2 (1−q2)
/// v(2) = w (1−p1) q1       + (1−w) (1−p2) q2
/// v(3) = w (1−p1) (1−q1)   + (1−w) (1−p2) (1−q2)
/// ```
pub fn exact_outcome_distribution(params: &CircuitParams) -> Distribution4 {
    let w = params.w;
    let (p1, q1) = params.set1();
    let (p2, q2) = params.set2();
    let v0 = w * p1 * q1 + (1.0 - w) * p2 * q2;
    let v1 = w * p1 * (1.0 - q1) + (1.0 - w) * p2 * (1.0 - q2);
    let v2 = w * (1.0 - p1) * q1 + (1.0 - w) * (1.0 - p2) * q2;
    let v3 = w * (1.0 - p1) * (1.0 - q1) + (1.0 - w) * (1.0 - p2) * (1.0 - q2);
    Distribution4::new([v0, v1, v2, v3]).expect("mixture of products is a distribution")
}

// Shared KL kernel; callers must have verified that p is strictly positive.
pub(crate) fn kl_core(v: &[f64; 4], p: &[f64; 4]) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        if v[i] > 0.0 {
            sum += v[i] * (v[i] / p[i]).ln();
        }
        // 0 · ln(0 / p) contributes 0
    }
    sum
}

/// KL divergence Σᵢ v(i)·ln(v(i)/p(i)) in nats, with the 0·ln 0 := 0 convention.
///
/// Rejects targets with an empty bin: this crate only ever measures
/// divergence against fully supported targets.
pub fn kl_divergence(v: &Distribution4, p: &Distribution4) -> Result<f64> {
    if let Some(index) = p.probs().iter().position(|&x| x == 0.0) {
        return Err(Error::TargetHasZeroEntry { index });
    }
    Ok(kl_core(&v.probs(), &p.probs()))
}

/// Total deviation of the four visible coins from fairness:
/// |p1−0.5| + |p2−0.5| + |q1−0.5| + |q2−0.5|. The selector coin is excluded.
pub fn fairness_penalty(params: &CircuitParams) -> f64 {
    (params.p1 - 0.5).abs()
        + (params.p2 - 0.5).abs()
        + (params.q1 - 0.5).abs()
        + (params.q2 - 0.5).abs()
}
