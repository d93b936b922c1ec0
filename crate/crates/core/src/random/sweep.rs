//! Monte Carlo estimate of how often random networks contain a cycle witness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::model::{model_probabilities, sample_network, RandomWeightModel};
use crate::random::witness::{
    find_parasite_witness, find_three_group_witness, required_group_size, required_group_size_parasite,
};

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub trials: usize,
    pub hits: usize,
    pub frequency: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Analytic lower bound from disjoint three-group blocks.
    pub bound: f64,
}

/// Wilson score interval at 95%.
pub fn wilson_interval(hits: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// `1 − (1 − P₀^{3m(m−1)/2} · P₁^{3m²})^{⌊n/3m⌋}`.
pub fn analytic_lower_bound(p0: f64, p1: f64, m: usize, n: usize) -> f64 {
    let m_f = m as f64;
    let block = p0.powf(1.5 * m_f * (m_f - 1.0)) * p1.powf(3.0 * m_f * m_f);
    let blocks = (n / (3 * m)) as i32;
    1.0 - (1.0 - block).powi(blocks)
}

/// Group sizes used for networks with all targets equal to `target`:
/// three-group size, and parasite size when that construction applies.
pub fn witness_sizes(model: &RandomWeightModel, target: f64) -> Result<(usize, Option<usize>)> {
    let targets = [target];
    let m = required_group_size(&targets, model.w_low)?;
    let m_parasite = match required_group_size_parasite(&targets, model.w_minus, model.w_low, model.w_high) {
        Ok(m) => Some(m),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    Ok((m, m_parasite))
}

/// Samples one network and reports whether either finder succeeds.
pub fn trial_has_witness(
    model: &RandomWeightModel,
    n: usize,
    target: f64,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    let (m, m_parasite) = witness_sizes(model, target)?;
    let network = sample_network(model, n, rng)?;
    let targets = vec![target; n];
    if find_three_group_witness(&network, &targets, &model.w_low, m).is_some() {
        return Ok(true);
    }
    Ok(m_parasite.is_some_and(|mp| {
        find_parasite_witness(&network, &targets, &model.w_minus, &model.w_low, &model.w_high, mp).is_some()
    }))
}

/// Fraction of `trials` sampled networks per size that admit a witness.
/// Trial `k` at size index `s` uses stream `(s << 32) | k` of a ChaCha8
/// generator seeded with `seed`, so results do not depend on thread count.
pub fn estimate_cycle_probability(
    model: &RandomWeightModel,
    target: f64,
    n_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    model.validate()?;
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    let (m, _) = witness_sizes(model, target)?;
    let (p0, p1, _) = model_probabilities(model);
    n_values
        .iter()
        .enumerate()
        .map(|(s, &n)| {
            let outcomes: Result<Vec<bool>> = (0..trials)
                .into_par_iter()
                .map(|k| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((s as u64) << 32) | k as u64);
                    trial_has_witness(model, n, target, &mut rng)
                })
                .collect();
            let hits = outcomes?.into_iter().filter(|&h| h).count();
            let frequency = hits as f64 / trials as f64;
            let (ci_low, ci_high) = wilson_interval(hits, trials);
            Ok(SweepRow {
                n,
                trials,
                hits,
                frequency,
                std_error: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
                ci_low,
                ci_high,
                bound: analytic_lower_bound(p0, p1, m, n),
            })
        })
        .collect()
}
