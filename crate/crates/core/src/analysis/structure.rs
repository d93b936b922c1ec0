//! Pattern-level classification: sign-symmetry, relative importance,
//! symmetrizing rescaling, transitivity, dominance and amplifying links.

use std::collections::VecDeque;


use crate::analysis::scaling::ScalingVector;
use crate::error::{Error, Result};
use crate::game::Network;
use crate::scalar::{within, Scalar};

pub fn is_sign_symmetric<T: Scalar>(network: &Network<T>) -> bool {
    let n = network.n();
    (0..n).all(|i| (0..i).all(|j| network.get(i, j).signum() == network.get(j, i).signum()))
}

/// Matrix of relative importances `r_ij = w_ij / w_ji`; `None` where either
/// weight vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeImportance<T> {
    n: usize,
    entries: Vec<Option<T>>,
}

impl<T: Scalar> RelativeImportance<T> {
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.entries[i * self.n + j].as_ref()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn relative_importance<T: Scalar>(network: &Network<T>) -> RelativeImportance<T> {
    let n = network.n();
    let entries = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let (wij, wji) = (network.get(i, j), network.get(j, i));
            (!wij.is_zero() && !wji.is_zero()).then(|| wij.clone() / wji.clone())
        })
        .collect();
    RelativeImportance { n, entries }
}

/// Symmetrizing scaling, carried as the squares `a_i²` so that exact mode
/// never needs an irrational square root.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizeWitness<T> {
    squared: Vec<T>,
}

impl<T: Scalar> SymmetrizeWitness<T> {
    pub fn from_squares(squared: Vec<T>) -> Result<Self> {
        ScalingVector::new(squared.clone())?;
        Ok(Self { squared })
    }

    pub fn from_scaling(scaling: &ScalingVector<T>) -> Self {
        Self { squared: scaling.values().iter().map(|a| a.clone() * a.clone()).collect() }
    }

    pub fn squared(&self) -> &[T] {
        &self.squared
    }

    /// The scaling vector itself, `a_i = sqrt(a_i²)`, in floating point.
    pub fn scaling(&self) -> ScalingVector<f64> {
        ScalingVector::new(self.squared.iter().map(|s| s.to_f64().sqrt()).collect())
            .expect("squares are positive")
    }

    /// Largest asymmetry `|v_kl - v_lk|` of the rescaled network, using
    /// `v_kl - v_lk = (w_kl a_k² - w_lk a_l²) / (a_k a_l)`.
    pub fn max_asymmetry(&self, network: &Network<T>) -> f64 {
        let n = network.n();
        let mut worst = 0.0f64;
        for k in 0..n {
            for l in 0..k {
                let num = network.get(k, l).clone() * self.squared[k].clone()
                    - network.get(l, k).clone() * self.squared[l].clone();
                if num.is_zero() {
                    continue;
                }
                let denom = (self.squared[k].to_f64() * self.squared[l].to_f64()).sqrt();
                worst = worst.max(num.to_f64().abs() / denom);
            }
        }
        worst
    }

    /// Whether the rescaled network is symmetric within `tol` (`0` = exact).
    pub fn verifies(&self, network: &Network<T>, tol: f64) -> bool {
        let n = network.n();
        if self.squared.len() != n {
            return false;
        }
        (0..n).all(|k| {
            (0..k).all(|l| {
                let lhs = network.get(k, l).clone() * self.squared[k].clone();
                let rhs = network.get(l, k).clone() * self.squared[l].clone();
                if lhs == rhs {
                    return true;
                }
                let denom = (self.squared[k].to_f64() * self.squared[l].to_f64()).sqrt();
                tol > 0.0 && (lhs - rhs).to_f64().abs() / denom <= tol
            })
        })
    }
}

/// Spanning-tree construction of a symmetrizing scaling.
///
/// Each connected component of the nonzero pattern is explored breadth
/// first from its lowest-indexed player, visiting neighbours in ascending
/// order; a newly reached player `j` with discoverer `i` gets
/// `a_j² = a_i² |w_ij| / |w_ji|`. The candidate is then checked on every
/// pair. Returns `None` if the network is not sign-symmetric or the check
/// fails.
pub fn symmetrize<T: Scalar>(network: &Network<T>, tol: f64) -> Option<SymmetrizeWitness<T>> {
    if !is_sign_symmetric(network) {
        return None;
    }
    let n = network.n();
    let mut squared: Vec<Option<T>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if squared[root].is_some() {
            continue;
        }
        squared[root] = Some(T::one());
        queue.push_back(root);
        while let Some(i) = queue.pop_front() {
            let si = squared[i].clone().unwrap();
            for j in 0..n {
                if j == i || squared[j].is_some() || network.get(i, j).is_zero() {
                    continue;
                }
                let sj = si.clone() * network.get(i, j).abs() / network.get(j, i).abs();
                squared[j] = Some(sj);
                queue.push_back(j);
            }
        }
    }
    let witness = SymmetrizeWitness { squared: squared.into_iter().map(Option::unwrap).collect() };
    witness.verifies(network, tol).then_some(witness)
}

/// Largest size accepted by [`brute_force_transitive`].
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Checks the forward/backward product identity on every simple cycle of
/// length at least 3 by enumeration. Exponential; meant as an oracle.
pub fn brute_force_transitive<T: Scalar>(network: &Network<T>, tol: f64) -> Result<bool> {
    let n = network.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Size { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut on_path = vec![false; n];
    for start in 0..n {
        on_path[start] = true;
        let ok = extend_cycles(network, tol, start, start, 1, T::one(), T::one(), &mut on_path);
        on_path[start] = false;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn extend_cycles<T: Scalar>(
    network: &Network<T>,
    tol: f64,
    start: usize,
    last: usize,
    len: usize,
    forward: T,
    backward: T,
    on_path: &mut [bool],
) -> bool {
    if len >= 3 {
        let f = forward.clone() * network.get(last, start).clone();
        let b = backward.clone() * network.get(start, last).clone();
        if !within(&f, &b, tol) {
            return false;
        }
    }
    // every extension of a path whose products both vanish also vanishes
    if len >= 2 && forward.is_zero() && backward.is_zero() {
        return true;
    }
    // cycles are enumerated once per rotation by keeping `start` minimal
    for next in (start + 1)..network.n() {
        if on_path[next] {
            continue;
        }
        on_path[next] = true;
        let ok = extend_cycles(
            network,
            tol,
            start,
            next,
            len + 1,
            forward.clone() * network.get(last, next).clone(),
            backward.clone() * network.get(next, last).clone(),
            on_path,
        );
        on_path[next] = false;
        if !ok {
            return false;
        }
    }
    true
}

/// Off-diagonal absolute row sums `Σ_{j≠i} |w_ij|`.
pub fn influence_sums<T: Scalar>(network: &Network<T>) -> Vec<T> {
    let n = network.n();
    (0..n)
        .map(|i| (0..n).filter(|&j| j != i).fold(T::zero(), |s, j| s + network.get(i, j).abs()))
        .collect()
}

/// Off-diagonal absolute column sums `Σ_{i≠j} |w_ij|`.
pub fn externality_sums<T: Scalar>(network: &Network<T>) -> Vec<T> {
    influence_sums(&network.transpose())
}

/// Every row's off-diagonal absolute sum is strictly below 1.
pub fn is_weak_influences<T: Scalar>(network: &Network<T>) -> bool {
    influence_sums(network).iter().all(|s| *s < T::one())
}

/// Every column's off-diagonal absolute sum is strictly below 1.
pub fn is_weak_externalities<T: Scalar>(network: &Network<T>) -> bool {
    externality_sums(network).iter().all(|s| *s < T::one())
}

/// Unordered pairs `(i, j)`, `i < j`, with `|w_ij w_ji| >= 1`.
pub fn amplifying_links<T: Scalar>(network: &Network<T>) -> Vec<(usize, usize)> {
    let n = network.n();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (network.get(i, j).clone() * network.get(j, i).clone()).abs() >= T::one() {
                pairs.push((i, j));
            }
        }
    }
    pairs
}
