//! Running a dynamic along a schedule, with convergence detection and cycle
//! certification.

use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::schedule::Schedule;
use crate::dynamics::step::{DynamicSpec, Stepper};
use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CycleDetection {
    Off,
    /// Exact profile equality; exact arithmetic only.
    Exact,
    /// Profiles snapped to a grid of the given spacing, candidates
    /// re-verified by a grid-snapped replay.
    Quantized(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub horizon: usize,
    pub conv_tol: f64,
    pub cycle_detection: CycleDetection,
    /// Seed for the random overshoot rule.
    pub seed: u64,
}

impl RunOptions {
    /// Defaults for the arithmetic: exact runs certify cycles and compare
    /// with zero tolerance; floating runs use `1e-9` and no cycle check.
    pub fn new<T: Scalar>(horizon: usize) -> Self {
        if T::EXACT {
            Self { horizon, conv_tol: 0.0, cycle_detection: CycleDetection::Exact, seed: 0 }
        } else {
            Self { horizon, conv_tol: 1e-9, cycle_detection: CycleDetection::Off, seed: 0 }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record<T> {
    pub period: usize,
    pub player: usize,
    /// Profile after the revision.
    pub profile: Profile<T>,
    /// Best response at the profile before the revision.
    pub best_response: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<T> {
    Converged { profile: Profile<T>, period: usize },
    /// The profile after period `entry + length - 1` equals the profile
    /// before period `entry`, with some change in between.
    CycleCertified { entry: usize, length: usize },
    HorizonExhausted,
}

impl<T> Verdict<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Converged { .. } => "converged",
            Verdict::CycleCertified { .. } => "cycle",
            Verdict::HorizonExhausted => "horizon",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunMetadata {
    pub spec: String,
    pub schedule: String,
    pub seed: u64,
    /// Whether the schedule is regular by construction.
    pub regular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub initial: Profile<T>,
    pub records: Vec<Record<T>>,
    pub verdict: Verdict<T>,
    pub metadata: RunMetadata,
}

impl<T: Scalar> Trajectory<T> {
    pub fn final_profile(&self) -> &Profile<T> {
        self.records.last().map_or(&self.initial, |r| &r.profile)
    }

    /// Initial profile followed by every post-revision profile.
    pub fn profiles(&self) -> impl Iterator<Item = &Profile<T>> {
        std::iter::once(&self.initial).chain(self.records.iter().map(|r| &r.profile))
    }

    /// Profile before period `k`.
    pub fn profile_before(&self, k: usize) -> &Profile<T> {
        if k == 0 {
            &self.initial
        } else {
            &self.records[k - 1].profile
        }
    }
}

impl<T> fmt::Display for Verdict<T>
where
    T: Scalar,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converged { profile, period } => write!(f, "converged at period {period} to {profile}"),
            Verdict::CycleCertified { entry, length } => {
                write!(f, "cycle certified: entry period {entry}, length {length}")
            }
            Verdict::HorizonExhausted => write!(f, "horizon exhausted"),
        }
    }
}

/// Online revisit detector over profile keys.
struct Revisits<K> {
    first_seen: HashMap<Vec<K>, usize>,
    last_change: usize,
}

impl<K: std::hash::Hash + Eq> Revisits<K> {
    fn new(initial: Vec<K>) -> Self {
        Self { first_seen: HashMap::from([(initial, 0)]), last_change: 0 }
    }

    /// Registers the profile at index `idx` (after `idx` revisions);
    /// returns the earlier index it repeats if a change happened in between.
    fn visit(&mut self, key: Vec<K>, idx: usize, changed: bool) -> Option<usize> {
        if changed {
            self.last_change = idx;
        }
        match self.first_seen.get(&key) {
            Some(&e) if self.last_change > e => Some(e),
            Some(_) => None,
            None => {
                self.first_seen.insert(key, idx);
                None
            }
        }
    }
}

fn quantize(x: &[f64], grid: f64) -> Vec<i64> {
    x.iter().map(|v| (v / grid).round() as i64).collect()
}

/// Runs `spec` along `schedule` from `x0` until convergence, a certified
/// cycle, or the horizon.
pub fn run<T: Scalar>(
    game: &Game<T>,
    x0: &Profile<T>,
    schedule: &Schedule,
    spec: &DynamicSpec<T>,
    options: &RunOptions,
) -> Result<Trajectory<T>> {
    let n = game.n();
    if options.horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    if !game.contains(x0) {
        return Err(Error::Precondition(format!("initial profile {x0} is outside the action set")));
    }
    spec.validate()?;
    schedule.check(n)?;
    match options.cycle_detection {
        CycleDetection::Exact if !T::EXACT => {
            return Err(Error::Config(
                "exact cycle certification needs exact arithmetic; enable quantization for floats".into(),
            ))
        }
        CycleDetection::Quantized(g) if !(g > 0.0 && g.is_finite()) => {
            return Err(Error::Config("quantization grid must be positive".into()))
        }
        _ => {}
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut stepper = Stepper::new(spec.clone());
    let key = |x: &[T]| x.iter().map(|v| v.exact_key().unwrap()).collect::<Vec<_>>();
    let mut exact = matches!(options.cycle_detection, CycleDetection::Exact).then(|| Revisits::new(key(x0)));
    let grid = match options.cycle_detection {
        CycleDetection::Quantized(g) => Some(g),
        _ => None,
    };
    let mut quantized = grid.map(|g| Revisits::new(quantize(&x0.to_f64(), g)));

    let mut x = x0.clone();
    let mut records = Vec::new();
    let mut quiet = vec![false; n];
    let mut quiet_count = 0;
    let mut verdict = Verdict::HorizonExhausted;

    for (k, i) in schedule.iter().enumerate().take(options.horizon) {
        let (value, b) = stepper.revise(game, &x, i, &mut rng);
        let delta = (value.clone() - x[i].clone()).abs();
        let changed = !delta.is_zero();
        x[i] = value;
        records.push(Record { period: k, player: i, profile: x.clone(), best_response: b });

        if let Some(seen) = exact.as_mut() {
            if let Some(entry) = seen.visit(key(&x), k + 1, changed) {
                verdict = Verdict::CycleCertified { entry, length: k + 1 - entry };
                break;
            }
        }
        if let (Some(seen), Some(g)) = (quantized.as_mut(), grid) {
            let snapped = quantize(&x.to_f64(), g);
            if let Some(entry) = seen.visit(snapped, k + 1, changed) {
                let players: Vec<usize> = records[entry..].iter().map(|r| r.player).collect();
                let start = records_profile(x0, &records, entry);
                if replay_quantized(&game.to_f64(), &start.to_f64(), &players, &spec.to_f64(), g) {
                    verdict = Verdict::CycleCertified { entry, length: k + 1 - entry };
                    break;
                }
            }
        }

        if delta.to_f64() > options.conv_tol || (options.conv_tol == 0.0 && changed) {
            quiet.iter_mut().for_each(|q| *q = false);
            quiet_count = 0;
        } else if !quiet[i] {
            quiet[i] = true;
            quiet_count += 1;
        }
        if quiet_count == n && game.is_nash(&x, options.conv_tol) {
            verdict = Verdict::Converged { profile: x.clone(), period: k };
            break;
        }
    }

    Ok(Trajectory {
        initial: x0.clone(),
        records,
        verdict,
        metadata: RunMetadata {
            spec: spec.to_string(),
            schedule: schedule.to_string(),
            seed: options.seed,
            regular: schedule.is_regular_by_construction(n),
        },
    })
}

fn records_profile<'a, T>(x0: &'a Profile<T>, records: &'a [Record<T>], idx: usize) -> &'a Profile<T> {
    if idx == 0 {
        x0
    } else {
        &records[idx - 1].profile
    }
}

/// Replays `players` from the grid-snapped `start`, snapping after every
/// revision, and checks for a nontrivial return to the snapped start.
/// BRCD revisions are replayed with the overshoot sign they would take
/// from the first sign of an alternating rule.
fn replay_quantized(game: &Game<f64>, start: &Profile<f64>, players: &[usize], spec: &DynamicSpec<f64>, grid: f64) -> bool {
    let snap = |v: f64| (v / grid).round() * grid;
    let mut x = Profile(start.iter().map(|v| snap(*v)).collect());
    let origin = quantize(&x, grid);
    let mut stepper = Stepper::new(spec.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut moved = false;
    for &i in players {
        let (value, _) = stepper.revise(game, &x, i, &mut rng);
        let value = snap(value);
        moved |= value != x[i];
        x[i] = value;
    }
    moved && quantize(&x, grid) == origin
}

/// Offline cycle search over a recorded trajectory in exact arithmetic:
/// the first `(entry, length)` with a nontrivial exact revisit.
pub fn detect_cycle<T: Scalar>(trajectory: &Trajectory<T>) -> Option<(usize, usize)> {
    if !T::EXACT {
        return None;
    }
    let key = |x: &[T]| x.iter().map(|v| v.exact_key().unwrap()).collect::<Vec<_>>();
    let mut seen = Revisits::new(key(&trajectory.initial));
    let mut previous = &trajectory.initial;
    for (k, r) in trajectory.records.iter().enumerate() {
        let changed = r.profile != *previous;
        if let Some(entry) = seen.visit(key(&r.profile), k + 1, changed) {
            return Some((entry, k + 1 - entry));
        }
        previous = &r.profile;
    }
    None
}

/// Offline cycle search for floating trajectories on a grid, with the
/// candidate confirmed by a grid-snapped replay.
pub fn detect_cycle_quantized(
    game: &Game<f64>,
    trajectory: &Trajectory<f64>,
    spec: &DynamicSpec<f64>,
    grid: f64,
) -> Option<(usize, usize)> {
    let mut seen = Revisits::new(quantize(&trajectory.initial, grid));
    let mut previous = quantize(&trajectory.initial, grid);
    for (k, r) in trajectory.records.iter().enumerate() {
        let snapped = quantize(&r.profile, grid);
        let changed = snapped != previous;
        if let Some(entry) = seen.visit(snapped.clone(), k + 1, changed) {
            let players: Vec<usize> = trajectory.records[entry..=k].iter().map(|r| r.player).collect();
            if replay_quantized(game, trajectory.profile_before(entry), &players, spec, grid) {
                return Some((entry, k + 1 - entry));
            }
        }
        previous = snapped;
    }
    None
}
