//! Pair-level mixture model for random directed networks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Network;

/// Distribution of a single weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightDist {
    Point { value: f64 },
    Uniform { low: f64, high: f64 },
}

impl WeightDist {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            WeightDist::Point { value } => value,
            WeightDist::Uniform { low, high } if low == high => low,
            WeightDist::Uniform { low, high } => rng.random_range(low..high),
        }
    }

    /// `P(lo <= X <= hi)`.
    pub fn prob_between(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            WeightDist::Point { value } => f64::from(u8::from(lo <= value && value <= hi)),
            WeightDist::Uniform { low, high } if low == high => f64::from(u8::from(lo <= low && low <= hi)),
            WeightDist::Uniform { low, high } => {
                let overlap = hi.min(high) - lo.max(low);
                (overlap.max(0.0) / (high - low)).min(1.0)
            }
        }
    }

    pub fn prob_zero(&self) -> f64 {
        self.prob_between(0.0, 0.0)
    }

    fn check(&self, name: &str) -> Result<()> {
        let ok = match *self {
            WeightDist::Point { value } => value.is_finite(),
            WeightDist::Uniform { low, high } => low.is_finite() && high.is_finite() && low <= high,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("{name}: invalid weight distribution {self:?}")))
        }
    }
}

/// Independent, identically distributed pairs. Each unordered pair is
///
/// * mutually indifferent with probability `p_zero`,
/// * a one-way link with probability `p_one_way` (direction by fair coin,
///   weight from `one_way_weight`),
/// * parasitic with probability `p_parasite` (roles by fair coin; the
///   parasite weighs the host's good by `host_weight`, the host weighs the
///   parasite's good by `parasite_weight`),
/// * otherwise generic, both weights drawn independently from `generic`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomWeightModel {
    pub p_zero: f64,
    pub p_one_way: f64,
    pub one_way_weight: WeightDist,
    pub p_parasite: f64,
    pub host_weight: WeightDist,
    pub parasite_weight: WeightDist,
    pub generic: WeightDist,
    /// `w⁻`: harm threshold for a parasitic pair.
    pub w_minus: f64,
    /// `w̲`: lower weight threshold.
    pub w_low: f64,
    /// `w̄`: upper bound on the host-side weight.
    pub w_high: f64,
}

impl RandomWeightModel {
    pub fn validate(&self) -> Result<()> {
        let masses = [self.p_zero, self.p_one_way, self.p_parasite];
        if masses.iter().any(|p| !(0.0..=1.0).contains(p)) || masses.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(Error::Config("pair masses must be nonnegative and sum to at most 1".into()));
        }
        if !(self.w_minus > 0.0 && self.w_low > 0.0 && self.w_low < self.w_high && self.w_high.is_finite()) {
            return Err(Error::Config("need w_minus > 0 and 0 < w_low < w_high".into()));
        }
        self.one_way_weight.check("one_way_weight")?;
        self.host_weight.check("host_weight")?;
        self.parasite_weight.check("parasite_weight")?;
        self.generic.check("generic")
    }

    pub fn p_generic(&self) -> f64 {
        (1.0 - self.p_zero - self.p_one_way - self.p_parasite).max(0.0)
    }
}

/// Analytic `(P₀, P₁(w̲), P₂(w⁻, w̲, w̄))` of a homogeneous model.
pub fn model_probabilities(model: &RandomWeightModel) -> (f64, f64, f64) {
    let g = &model.generic;
    let g0 = g.prob_zero();
    let p_generic = model.p_generic();
    let p0 = model.p_zero + p_generic * g0 * g0;
    let at_least = |d: &WeightDist| d.prob_between(model.w_low, f64::INFINITY);
    let p1 = 0.5 * model.p_one_way * at_least(&model.one_way_weight) + p_generic * at_least(g) * g0;
    let host_ok = |d: &WeightDist| d.prob_between(model.w_low, model.w_high);
    let harm_ok = |d: &WeightDist| d.prob_between(f64::NEG_INFINITY, -model.w_minus);
    let p2 = 0.5 * model.p_parasite * host_ok(&model.host_weight) * harm_ok(&model.parasite_weight)
        + p_generic * host_ok(g) * harm_ok(g);
    (p0, p1, p2)
}

/// Kind of pair drawn by the sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    Zero,
    OneWay,
    Parasite,
    Generic,
}

/// Draws one unordered pair: `(kind, w_ij, w_ji)`.
pub fn sample_pair<R: Rng + ?Sized>(model: &RandomWeightModel, rng: &mut R) -> (PairKind, f64, f64) {
    let u: f64 = rng.random();
    if u < model.p_zero {
        (PairKind::Zero, 0.0, 0.0)
    } else if u < model.p_zero + model.p_one_way {
        let w = model.one_way_weight.sample(rng);
        if rng.random_bool(0.5) {
            (PairKind::OneWay, w, 0.0)
        } else {
            (PairKind::OneWay, 0.0, w)
        }
    } else if u < model.p_zero + model.p_one_way + model.p_parasite {
        let benefit = model.host_weight.sample(rng);
        let harm = model.parasite_weight.sample(rng);
        // first player is the parasite with probability 1/2
        if rng.random_bool(0.5) {
            (PairKind::Parasite, benefit, harm)
        } else {
            (PairKind::Parasite, harm, benefit)
        }
    } else {
        (PairKind::Generic, model.generic.sample(rng), model.generic.sample(rng))
    }
}

/// Samples an `n`-player network, pairs independent, unit diagonal.
pub fn sample_network<R: Rng + ?Sized>(model: &RandomWeightModel, n: usize, rng: &mut R) -> Result<Network<f64>> {
    if n < 2 {
        return Err(Error::Config("random networks need at least two players".into()));
    }
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        weights[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let (_, wij, wji) = sample_pair(model, rng);
            weights[i * n + j] = wij;
            weights[j * n + i] = wji;
        }
    }
    Network::new(n, weights)
}
