//! Revision schedules: which player moves in each period.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// The given ordering of all players, repeated.
    RoundRobin { order: Vec<usize> },
    /// An arbitrary finite sequence repeated; may omit players.
    Cyclic { sequence: Vec<usize> },
    /// Independent uniform draws from `0..n`.
    Random { n: usize, seed: u64 },
    /// A finite prefix followed by round-robin over `0..n`.
    Scripted { prefix: Vec<usize>, n: usize },
}

impl Schedule {
    pub fn round_robin(n: usize) -> Self {
        Schedule::RoundRobin { order: (0..n).collect() }
    }

    pub fn cyclic(sequence: Vec<usize>) -> Result<Self> {
        if sequence.is_empty() {
            return Err(Error::Config("cyclic schedule needs at least one player".into()));
        }
        Ok(Schedule::Cyclic { sequence })
    }

    /// Checks that every referenced player exists in an `n`-player game.
    pub fn check(&self, n: usize) -> Result<()> {
        let largest = match self {
            Schedule::RoundRobin { order } => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != (0..n).collect::<Vec<_>>() {
                    return Err(Error::Config("round-robin order must list every player once".into()));
                }
                None
            }
            Schedule::Cyclic { sequence } => sequence.iter().max().copied(),
            Schedule::Random { n: m, .. } | Schedule::Scripted { n: m, .. } if *m != n => {
                return Err(Error::Config(format!("schedule is for {m} players, game has {n}")));
            }
            Schedule::Random { .. } => None,
            Schedule::Scripted { prefix, .. } => prefix.iter().max().copied(),
        };
        match largest {
            Some(p) if p >= n => Err(Error::Config(format!("schedule names player {} of {n}", p + 1))),
            _ => Ok(()),
        }
    }

    pub fn iter(&self) -> ScheduleIter<'_> {
        let rng = match self {
            Schedule::Random { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        ScheduleIter { schedule: self, period: 0, rng }
    }

    pub fn materialize(&self, periods: usize) -> Vec<usize> {
        self.iter().take(periods).collect()
    }

    /// Whether every window of `n` consecutive periods contains every player
    /// by construction.
    pub fn is_regular_by_construction(&self, n: usize) -> bool {
        match self {
            Schedule::RoundRobin { order } => order.len() == n,
            Schedule::Cyclic { sequence } => {
                let mut seen = vec![false; n];
                sequence.iter().for_each(|&p| seen[p] = true);
                seen.iter().all(|s| *s)
            }
            Schedule::Random { .. } | Schedule::Scripted { .. } => false,
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |v: &[usize]| v.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",");
        match self {
            Schedule::RoundRobin { order } => write!(f, "round-robin({})", one_based(order)),
            Schedule::Cyclic { sequence } => write!(f, "cyclic({})", one_based(sequence)),
            Schedule::Random { n, seed } => write!(f, "random(n={n},seed={seed})"),
            Schedule::Scripted { prefix, n } => write!(f, "scripted({};then round-robin n={n})", one_based(prefix)),
        }
    }
}

pub struct ScheduleIter<'a> {
    schedule: &'a Schedule,
    period: usize,
    rng: Option<ChaCha8Rng>,
}

impl Iterator for ScheduleIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let k = self.period;
        self.period += 1;
        Some(match self.schedule {
            Schedule::RoundRobin { order } => order[k % order.len()],
            Schedule::Cyclic { sequence } => sequence[k % sequence.len()],
            Schedule::Random { n, .. } => self.rng.as_mut().unwrap().random_range(0..*n),
            Schedule::Scripted { prefix, n } => {
                if k < prefix.len() {
                    prefix[k]
                } else {
                    (k - prefix.len()) % n
                }
            }
        })
    }
}

/// True iff every sliding window of `k` consecutive periods within the first
/// `k * window_count` periods contains each of the `n` players.
pub fn validate_schedule_regular(schedule: &Schedule, n: usize, k: usize, window_count: usize) -> bool {
    if k == 0 || k < n {
        return false;
    }
    let seq = schedule.materialize(k * window_count);
    let mut counts = vec![0usize; n];
    for (t, &p) in seq.iter().enumerate() {
        if p >= n {
            return false;
        }
        counts[p] += 1;
        if t >= k {
            counts[seq[t - k]] -= 1;
        }
        if t + 1 >= k && counts.contains(&0) {
            return false;
        }
    }
    true
}
