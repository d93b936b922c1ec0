//! Random instance generators shared by the property tests and the
//! acceptance suite.
#![allow(dead_code)]

use dngame::analysis::{spectral_radius_abs, SpectralOptions};
use dngame::{Cap, Game, Network, Rational, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Nonzero `±p/q` with `1 ≤ p ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn small_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    let p = rng.random_range(1..=max_num);
    let d = rng.random_range(1..=max_den);
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    q(sign * p, d)
}

fn from_entries(n: usize, mut entry: impl FnMut(usize, usize) -> Rational) -> Network<Rational> {
    let weights = (0..n * n)
        .map(|k| if k / n == k % n { q(1, 1) } else { entry(k / n, k % n) })
        .collect();
    Network::new(n, weights).unwrap()
}

/// Independent entries, each zero with probability `zero_prob`.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64) -> Network<Rational> {
    from_entries(n, |_, _| if rng.random_bool(zero_prob) { q(0, 1) } else { small_rational(rng, 4, 4) })
}

/// `w_ij = v_ij a_j / a_i` for symmetric `V` and positive rational `a`.
pub fn symmetrizable_network(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64) -> Network<Rational> {
    let a: Vec<Rational> = (0..n).map(|_| q(rng.random_range(1..=5), rng.random_range(1..=5))).collect();
    let mut v = vec![q(0, 1); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            if !rng.random_bool(zero_prob) {
                let x = small_rational(rng, 3, 3);
                v[i * n + j] = x.clone();
                v[j * n + i] = x;
            }
        }
    }
    from_entries(n, |i, j| v[i * n + j].clone() * a[j].clone() / a[i].clone())
}

/// Replaces one off-diagonal entry.
pub fn perturbed(rng: &mut ChaCha8Rng, network: &Network<Rational>) -> Network<Rational> {
    let n = network.n();
    let i = rng.random_range(0..n);
    let j = (i + rng.random_range(1..n)) % n;
    let fresh = if rng.random_bool(0.3) { q(0, 1) } else { small_rational(rng, 4, 4) };
    from_entries(n, |k, l| if (k, l) == (i, j) { fresh.clone() } else { network.get(k, l).clone() })
}

/// Equal thirds: unstructured, symmetrizable, symmetrizable with one entry changed.
pub fn mixed_network(rng: &mut ChaCha8Rng, n: usize) -> Network<Rational> {
    let zero_prob = rng.random_range(0.0..0.7);
    match rng.random_range(0..3) {
        0 => random_network(rng, n, zero_prob),
        1 => symmetrizable_network(rng, n, zero_prob),
        _ => {
            let base = symmetrizable_network(rng, n, zero_prob);
            perturbed(rng, &base)
        }
    }
}

/// Multiplies every off-diagonal entry by `factor`.
pub fn scaled(network: &Network<Rational>, factor: &Rational) -> Network<Rational> {
    let n = network.n();
    from_entries(n, |i, j| network.get(i, j).clone() * factor.clone())
}

/// Random network with `ρ(|W| - I)` close to `rho`; `None` if the draw has
/// no off-diagonal mass.
pub fn network_with_radius(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64, rho: f64) -> Option<Network<Rational>> {
    let w = random_network(rng, n, zero_prob);
    let r = spectral_radius_abs(&w, &SpectralOptions::default()).ok()?;
    if r.upper <= 1e-9 {
        return None;
    }
    let factor = Rational::from_f64(rho / r.estimate)?;
    Some(scaled(&w, &factor))
}

/// Lower triangular under a random relabelling.
pub fn random_dan(rng: &mut ChaCha8Rng, n: usize) -> Network<Rational> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut rank = vec![0; n];
    for (r, &p) in order.iter().enumerate() {
        rank[p] = r;
    }
    from_entries(n, |i, j| {
        if rank[j] < rank[i] && rng.random_bool(0.5) {
            small_rational(rng, 4, 2)
        } else {
            q(0, 1)
        }
    })
}

pub fn random_targets(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| q(rng.random_range(2..=8), 4)).collect()
}

/// Unbounded with probability 0.3, otherwise a cap in `[1/2, 3]`.
pub fn random_caps(rng: &mut ChaCha8Rng, n: usize) -> Vec<Cap<Rational>> {
    (0..n)
        .map(|_| if rng.random_bool(0.3) { Cap::Unbounded } else { Cap::Finite(q(rng.random_range(2..=12), 4)) })
        .collect()
}

pub fn random_game(rng: &mut ChaCha8Rng, network: Network<Rational>) -> Game<Rational> {
    let n = network.n();
    let targets = random_targets(rng, n);
    let caps = random_caps(rng, n);
    Game::relaxed(network, targets, caps).unwrap()
}

/// Random profile inside the action set with small denominators.
pub fn random_profile(rng: &mut ChaCha8Rng, game: &Game<Rational>) -> Vec<Rational> {
    game.caps()
        .iter()
        .map(|c| {
            let hi = c.finite().map_or(3.0, |v| v.to_f64());
            let steps = (hi * 8.0).floor() as i64;
            q(rng.random_range(0..=steps), 8)
        })
        .collect()
}
