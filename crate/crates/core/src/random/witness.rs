//! Cycle witnesses: substructures of a network that force best-response
//! dynamics into a cycle from an explicit start, along an explicit schedule.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{run, DynamicSpec, RunOptions, Schedule, Trajectory};
use crate::error::{Error, Result};
use crate::game::{Game, Network, Profile};
use crate::scalar::Scalar;

/// Networks up to this size (or group size 1) are searched exhaustively.
pub const EXHAUSTIVE_MAX_N: usize = 12;
/// Randomized greedy restarts used above [`EXHAUSTIVE_MAX_N`].
pub const RESTARTS: usize = 10_000;
const SEARCH_SEED: u64 = 0x5eed;
const MAX_GROUP: usize = 1 << 20;

/// Smallest `m` with `m · t̲ · w̲ ≥ t̄`.
pub fn required_group_size(targets: &[f64], w_low: f64) -> Result<usize> {
    let (lo, hi) = target_range(targets)?;
    if w_low.is_nan() || w_low <= 0.0 {
        return Err(Error::Config("w_low must be positive".into()));
    }
    smallest_m(|m| m as f64 * lo * w_low >= hi)
}

/// Smallest `m` with `t̄ − w̲t̲ < m · w̲ · min(1, w⁻) · z`, where
/// `z = t̲ − w̄t̄` must be positive.
pub fn required_group_size_parasite(targets: &[f64], w_minus: f64, w_low: f64, w_high: f64) -> Result<usize> {
    let (lo, hi) = target_range(targets)?;
    if !(w_minus > 0.0 && w_low > 0.0 && w_low <= w_high) {
        return Err(Error::Config("need w_minus > 0 and 0 < w_low <= w_high".into()));
    }
    let z = lo - w_high * hi;
    if z <= 0.0 {
        return Err(Error::Precondition(format!(
            "parasite construction needs t_min - w_high * t_max > 0, got {z}"
        )));
    }
    let slack = hi - w_low * lo;
    smallest_m(|m| slack < m as f64 * w_low * w_minus.min(1.0) * z)
}

fn target_range(targets: &[f64]) -> Result<(f64, f64)> {
    if targets.is_empty() || targets.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Config("targets must be positive and finite".into()));
    }
    let lo = targets.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = targets.iter().copied().fold(0.0, f64::max);
    Ok((lo, hi))
}

fn smallest_m(ok: impl Fn(usize) -> bool) -> Result<usize> {
    // monotone predicate: exponential then binary search
    let mut hi = 1;
    while !ok(hi) {
        hi *= 2;
        if hi > MAX_GROUP {
            return Err(Error::Config(format!("required group size exceeds {MAX_GROUP}")));
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessPattern {
    /// Group `g` is affected by group `g − 1` (indices mod 3) and ignored by it.
    ThreeGroup { groups: [Vec<usize>; 3] },
    /// Parasites benefit from the host, which they harm.
    Parasite { host: usize, parasites: Vec<usize> },
}

/// A start profile and a finite schedule along which best-response
/// dynamics return to the start after visiting the `waypoints`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleWitness<T> {
    pub pattern: WitnessPattern,
    pub start: Profile<T>,
    /// One full lap of the schedule.
    pub sequence: Vec<usize>,
    /// `(updates, profile)`: the scripted profile after that many updates.
    pub waypoints: Vec<(usize, Profile<T>)>,
}

impl<T: Scalar> CycleWitness<T> {
    pub fn cycle_length(&self) -> usize {
        self.sequence.len()
    }

    pub fn players(&self) -> Vec<usize> {
        let mut players = match &self.pattern {
            WitnessPattern::ThreeGroup { groups } => groups.concat(),
            WitnessPattern::Parasite { host, parasites } => {
                let mut p = parasites.clone();
                p.push(*host);
                p
            }
        };
        players.sort_unstable();
        players
    }

    pub fn schedule(&self) -> Schedule {
        Schedule::Cyclic { sequence: self.sequence.clone() }
    }

    /// Runs best-response dynamics with unbounded caps along the witness
    /// schedule for two laps. Exact arithmetic certifies the cycle.
    pub fn replay(&self, network: &Network<T>, targets: &[T]) -> Result<Trajectory<T>> {
        let game = Game::unbounded(network.clone(), targets.to_vec())?;
        let options = RunOptions::new::<T>(2 * self.cycle_length() + 1);
        run(&game, &self.start, &self.schedule(), &DynamicSpec::Brd, &options)
    }

    /// Whether `trajectory` passes through every waypoint.
    pub fn follows_script(&self, trajectory: &Trajectory<T>) -> bool {
        self.waypoints.iter().all(|(k, profile)| {
            *k <= trajectory.records.len() && trajectory.profile_before(*k) == profile
        })
    }
}

fn ge<T: Scalar>(a: &T, b: &T) -> bool {
    a >= b
}

/// Searches for three groups of size `m` in the three-group pattern whose
/// targets also satisfy `Σ_{k ∈ I_{g−1}} w_ik t_k ≥ t_i`. Exhaustive when
/// `m = 1` or `n ≤ EXHAUSTIVE_MAX_N`, randomized restarts otherwise.
pub fn find_three_group_witness<T: Scalar>(
    network: &Network<T>,
    targets: &[T],
    w_low: &T,
    m: usize,
) -> Option<CycleWitness<T>> {
    let n = network.n();
    if m == 0 || 3 * m > n || targets.len() != n {
        return None;
    }
    let zero = T::zero();
    let w = |i: usize, j: usize| network.get(i, j);
    // b is in the group after a's: b is affected by a, a ignores b
    let follows = |a: usize, b: usize| w(a, b).is_zero() && ge(w(b, a), w_low);
    let compatible = |a: usize, ga: usize, b: usize, gb: usize| match (3 + gb - ga) % 3 {
        0 => w(a, b).is_zero() && w(b, a).is_zero(),
        1 => follows(a, b),
        _ => follows(b, a),
    };
    let sums_ok = |groups: &[Vec<usize>; 3]| {
        (0..3).all(|g| {
            let prev = &groups[(g + 2) % 3];
            groups[g].iter().all(|&i| {
                let pressure = prev.iter().fold(zero.clone(), |acc, &k| acc + w(i, k).clone() * targets[k].clone());
                pressure >= targets[i]
            })
        })
    };

    let found = if m == 1 {
        let mut hit = None;
        'outer: for a in 0..n {
            for b in (a + 1)..n {
                for c in (a + 1)..n {
                    if c == b || !follows(a, b) || !follows(b, c) || !follows(c, a) {
                        continue;
                    }
                    let groups = [vec![a], vec![b], vec![c]];
                    if sums_ok(&groups) {
                        hit = Some(groups);
                        break 'outer;
                    }
                }
            }
        }
        hit
    } else if n <= EXHAUSTIVE_MAX_N {
        let mut assignment: Vec<(usize, usize)> = Vec::new();
        let mut groups: [Vec<usize>; 3] = Default::default();
        three_group_backtrack(0, n, m, &compatible, &sums_ok, &mut assignment, &mut groups)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
        let mut order: Vec<usize> = (0..n).collect();
        let mut hit = None;
        for _ in 0..RESTARTS {
            order.shuffle(&mut rng);
            let mut groups: [Vec<usize>; 3] = Default::default();
            let offset = rng.random_range(0..3);
            for &p in &order {
                for dg in 0..3 {
                    let g = (offset + dg) % 3;
                    if groups[g].len() < m
                        && (0..3).all(|h| groups[h].iter().all(|&q| compatible(q, h, p, g)))
                    {
                        groups[g].push(p);
                        break;
                    }
                }
                if groups.iter().all(|grp| grp.len() == m) {
                    break;
                }
            }
            if groups.iter().all(|grp| grp.len() == m) && sums_ok(&groups) {
                hit = Some(groups);
                break;
            }
        }
        hit
    }?;
    Some(three_group_script(n, targets, found))
}

#[allow(clippy::too_many_arguments)]
fn three_group_backtrack(
    next: usize,
    n: usize,
    m: usize,
    compatible: &dyn Fn(usize, usize, usize, usize) -> bool,
    sums_ok: &dyn Fn(&[Vec<usize>; 3]) -> bool,
    assignment: &mut Vec<(usize, usize)>,
    groups: &mut [Vec<usize>; 3],
) -> Option<[Vec<usize>; 3]> {
    let filled: usize = groups.iter().map(Vec::len).sum();
    if filled == 3 * m {
        return sums_ok(groups).then(|| groups.clone());
    }
    if n - next < 3 * m - filled {
        return None;
    }
    // the first assigned player goes to group 0: rotations are equivalent
    let choices: &[usize] = if assignment.is_empty() { &[0] } else { &[0, 1, 2] };
    for &g in choices {
        if groups[g].len() < m && assignment.iter().all(|&(q, h)| compatible(q, h, next, g)) {
            assignment.push((next, g));
            groups[g].push(next);
            let found = three_group_backtrack(next + 1, n, m, compatible, sums_ok, assignment, groups);
            groups[g].pop();
            assignment.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    three_group_backtrack(next + 1, n, m, compatible, sums_ok, assignment, groups)
}

fn three_group_script<T: Scalar>(n: usize, targets: &[T], mut groups: [Vec<usize>; 3]) -> CycleWitness<T> {
    for g in &mut groups {
        g.sort_unstable();
    }
    let at_targets = |active: &[usize]| {
        let mut x = Profile::zeros(n);
        for &g in active {
            for &i in &groups[g] {
                x[i] = targets[i].clone();
            }
        }
        x
    };
    // (group revised, active groups afterwards)
    let phases: [(usize, &[usize]); 6] = [(2, &[0, 2]), (0, &[2]), (1, &[1, 2]), (2, &[1]), (0, &[0, 1]), (1, &[0])];
    let mut sequence = Vec::new();
    let mut waypoints = Vec::new();
    for (g, active) in phases {
        sequence.extend_from_slice(&groups[g]);
        waypoints.push((sequence.len(), at_targets(active)));
    }
    CycleWitness {
        start: at_targets(&[0]),
        pattern: WitnessPattern::ThreeGroup { groups },
        sequence,
        waypoints,
    }
}

/// Searches for a host and `m` mutually indifferent parasites with
/// `w_ij ∈ [w̲, w̄]` and `w_ji ≤ −w⁻` whose scripted four-phase cycle
/// is valid for these targets.
pub fn find_parasite_witness<T: Scalar>(
    network: &Network<T>,
    targets: &[T],
    w_minus: &T,
    w_low: &T,
    w_high: &T,
    m: usize,
) -> Option<CycleWitness<T>> {
    let n = network.n();
    if m == 0 || m + 1 > n || targets.len() != n {
        return None;
    }
    let w = |i: usize, j: usize| network.get(i, j);
    let harm = -w_minus.clone();
    let exhaustive = m == 1 || n <= EXHAUSTIVE_MAX_N;
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let budget = RESTARTS / n.max(1) + 1;

    for host in 0..n {
        let t_host = &targets[host];
        let candidates: Vec<(usize, T)> = (0..n)
            .filter(|&i| i != host)
            .filter(|&i| w(i, host) >= w_low && w(i, host) <= w_high && *w(host, i) <= harm)
            .filter_map(|i| {
                let z = targets[i].clone() - w(i, host).clone() * t_host.clone();
                (z > T::zero()).then_some((i, z))
            })
            .collect();
        if candidates.len() < m {
            continue;
        }
        let valid = |set: &[usize]| -> bool {
            let pushed = set.iter().fold(t_host.clone(), |acc, &k| {
                let z = &candidates[k].1;
                acc - w(host, candidates[k].0).clone() * z.clone()
            });
            set.iter().all(|&k| {
                let i = candidates[k].0;
                targets[i].clone() - w(i, host).clone() * pushed.clone() <= T::zero()
            })
        };
        let independent = |a: usize, b: usize| {
            let (i, j) = (candidates[a].0, candidates[b].0);
            w(i, j).is_zero() && w(j, i).is_zero()
        };
        let chosen = if exhaustive {
            let mut set = Vec::new();
            subset_backtrack(0, candidates.len(), m, &independent, &valid, &mut set)
        } else {
            let mut order: Vec<usize> = (0..candidates.len()).collect();
            let mut hit = None;
            for _ in 0..budget {
                order.shuffle(&mut rng);
                let mut set: Vec<usize> = Vec::new();
                for &k in &order {
                    if set.iter().all(|&q| independent(q, k)) {
                        set.push(k);
                        if set.len() == m {
                            break;
                        }
                    }
                }
                if set.len() == m && valid(&set) {
                    hit = Some(set);
                    break;
                }
            }
            hit
        };
        if let Some(set) = chosen {
            let picked: Vec<(usize, T)> = set.iter().map(|&k| candidates[k].clone()).collect();
            return Some(parasite_script(network, targets, host, picked));
        }
    }
    None
}

fn subset_backtrack(
    next: usize,
    len: usize,
    m: usize,
    independent: &dyn Fn(usize, usize) -> bool,
    valid: &dyn Fn(&[usize]) -> bool,
    set: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if set.len() == m {
        return valid(set).then(|| set.clone());
    }
    if len - next < m - set.len() {
        return None;
    }
    if set.iter().all(|&q| independent(q, next)) {
        set.push(next);
        let found = subset_backtrack(next + 1, len, m, independent, valid, set);
        set.pop();
        if found.is_some() {
            return found;
        }
    }
    subset_backtrack(next + 1, len, m, independent, valid, set)
}

fn parasite_script<T: Scalar>(
    network: &Network<T>,
    targets: &[T],
    host: usize,
    mut picked: Vec<(usize, T)>,
) -> CycleWitness<T> {
    picked.sort_by_key(|(i, _)| *i);
    let n = network.n();
    let parasites: Vec<usize> = picked.iter().map(|(i, _)| *i).collect();
    let mut x1 = Profile::zeros(n);
    x1[host] = targets[host].clone();
    let mut x2 = x1.clone();
    for (i, z) in &picked {
        x2[*i] = z.clone();
    }
    let mut x3 = x2.clone();
    x3[host] = picked
        .iter()
        .fold(targets[host].clone(), |acc, (i, z)| acc - network.get(host, *i).clone() * z.clone());
    let mut x4 = Profile::zeros(n);
    x4[host] = x3[host].clone();

    let m = parasites.len();
    let mut sequence = parasites.clone();
    sequence.push(host);
    sequence.extend_from_slice(&parasites);
    sequence.push(host);
    CycleWitness {
        pattern: WitnessPattern::Parasite { host, parasites },
        start: x1.clone(),
        waypoints: vec![(m, x2), (m + 1, x3), (2 * m + 1, x4), (2 * m + 2, x1)],
        sequence,
    }
}
