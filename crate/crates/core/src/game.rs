//! Directed network games: the weight matrix, targets, capacities and the
//! piecewise-linear best-response map.

use std::fmt;
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Square weight matrix with unit diagonal. Entry `(i, j)` is the effect of
/// player `j`'s good on player `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    n: usize,
    weights: Vec<T>,
}

impl<T: Scalar> Network<T> {
    /// Builds a network from a row-major weight list of length `n * n`.
    pub fn new(n: usize, weights: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidNetwork("a network needs at least one player".into()));
        }
        if weights.len() != n * n {
            return Err(Error::InvalidNetwork(format!(
                "expected {} weights for {n} players, got {}",
                n * n,
                weights.len()
            )));
        }
        if let Some(pos) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::InvalidNetwork(format!(
                "weight ({}, {}) is not finite",
                pos / n + 1,
                pos % n + 1
            )));
        }
        for i in 0..n {
            if !weights[i * n + i].is_one() {
                return Err(Error::InvalidNetwork(format!(
                    "diagonal entry ({0}, {0}) must equal 1, found {1}",
                    i + 1,
                    weights[i * n + i]
                )));
            }
        }
        Ok(Self { n, weights })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidNetwork("weight matrix must be square".into()));
        }
        Self::new(n, rows.iter().flatten().cloned().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut weights = vec![T::zero(); n * n];
        for i in 0..n {
            weights[i * n + i] = T::one();
        }
        Self { n, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.weights[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let weights = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        Self { n, weights }
    }

    /// Off-diagonal pairs `(i, j)` with a nonzero weight `w_ij`.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .map(move |k| (k / n, k % n))
            .filter(move |&(i, j)| i != j && !self.get(i, j).is_zero())
    }

    /// Entries of `|W| - I` as floats, row-major.
    pub fn abs_off_diagonal(&self) -> Vec<f64> {
        let n = self.n;
        (0..n * n)
            .map(|k| if k / n == k % n { 0.0 } else { self.weights[k].to_f64().abs() })
            .collect()
    }

    pub fn to_f64(&self) -> Network<f64> {
        Network { n: self.n, weights: self.weights.iter().map(Scalar::to_f64).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub(crate) fn from_parts_unchecked(n: usize, weights: Vec<T>) -> Self {
        Self { n, weights }
    }
}

impl Network<f64> {
    /// Exact rational copy of a floating network (every finite double is a
    /// dyadic rational).
    pub fn to_rational(&self) -> Network<Rational> {
        Network {
            n: self.n,
            weights: self.weights.iter().map(|w| Rational::from_f64(*w).unwrap()).collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Network<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|w| w.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Upper bound of a player's action set.
#[derive(Debug, Clone, PartialEq)]
pub enum Cap<T> {
    Finite(T),
    Unbounded,
}

impl<T: Scalar> Cap<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Cap::Finite(c) => Some(c),
            Cap::Unbounded => None,
        }
    }

    pub fn admits(&self, value: &T) -> bool {
        match self {
            Cap::Finite(c) => value <= c,
            Cap::Unbounded => true,
        }
    }

    pub fn to_f64(&self) -> Cap<f64> {
        match self {
            Cap::Finite(c) => Cap::Finite(c.to_f64()),
            Cap::Unbounded => Cap::Unbounded,
        }
    }

    /// Clamps `value` into `[0, cap]`.
    pub fn clamp(&self, value: T) -> T {
        if value < T::zero() {
            return T::zero();
        }
        match self {
            Cap::Finite(c) if value > *c => c.clone(),
            _ => value,
        }
    }
}

/// Benefit family. Only the logarithmic family `f(s) = log(1 + s)` with
/// cost `c_i = 1 / (1 + t_i)` is supported; dynamics never consult it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BenefitSpec {
    #[default]
    Logarithmic,
}

impl BenefitSpec {
    pub fn cost<T: Scalar>(&self, target: &T) -> T {
        match self {
            BenefitSpec::Logarithmic => T::one() / (T::one() + target.clone()),
        }
    }

    /// Benefit value at aggregate `s`; `None` outside the domain.
    pub fn benefit(&self, aggregate: f64) -> Option<f64> {
        match self {
            BenefitSpec::Logarithmic => (1.0 + aggregate > 0.0).then(|| aggregate.ln_1p()),
        }
    }

    /// Marginal benefit `f'(s)`.
    pub fn marginal(&self, aggregate: f64) -> f64 {
        match self {
            BenefitSpec::Logarithmic => 1.0 / (1.0 + aggregate),
        }
    }
}

/// Action profile: one production level per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile<T>(pub Vec<T>);

impl<T: Scalar> Profile<T> {
    pub fn zeros(n: usize) -> Self {
        Profile(vec![T::zero(); n])
    }

    pub fn from_f64(values: &[f64]) -> Option<Self> {
        values.iter().map(|v| T::from_f64(*v)).collect::<Option<Vec<_>>>().map(Profile)
    }

    pub fn to_f64(&self) -> Profile<f64> {
        Profile(self.0.iter().map(Scalar::to_f64).collect())
    }

    pub fn with(&self, i: usize, value: T) -> Self {
        let mut next = self.clone();
        next.0[i] = value;
        next
    }
}

impl<T> Deref for Profile<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for Profile<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

impl<T> From<Vec<T>> for Profile<T> {
    fn from(values: Vec<T>) -> Self {
        Profile(values)
    }
}

impl<T: Scalar> fmt::Display for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A network together with targets, capacities and the benefit family.
#[derive(Debug, Clone, PartialEq)]
pub struct Game<T> {
    network: Network<T>,
    targets: Vec<T>,
    caps: Vec<Cap<T>>,
    benefit: BenefitSpec,
}

impl<T: Scalar> Game<T> {
    /// Builds a game and enforces `0 < t_i < cap_i` for every player.
    pub fn new(network: Network<T>, targets: Vec<T>, caps: Vec<Cap<T>>) -> Result<Self> {
        let game = Self::relaxed(network, targets, caps)?;
        if let Some(i) = game.first_cap_violation() {
            return Err(Error::InvalidGame(format!(
                "target of player {} must lie strictly below its cap",
                i + 1
            )));
        }
        Ok(game)
    }

    /// Builds a game requiring only positive targets and positive caps.
    /// Targets at or above the cap are accepted; the best response then
    /// starts at the cap.
    pub fn relaxed(network: Network<T>, targets: Vec<T>, caps: Vec<Cap<T>>) -> Result<Self> {
        let n = network.n();
        if targets.len() != n || caps.len() != n {
            return Err(Error::InvalidGame(format!(
                "{n} players need {n} targets and {n} caps, got {} and {}",
                targets.len(),
                caps.len()
            )));
        }
        if let Some(i) = targets.iter().position(|t| !t.is_finite() || *t <= T::zero()) {
            return Err(Error::InvalidGame(format!(
                "target of player {} must be positive and finite",
                i + 1
            )));
        }
        if let Some(i) = caps.iter().position(|c| matches!(c, Cap::Finite(v) if *v <= T::zero())) {
            return Err(Error::InvalidGame(format!("cap of player {} must be positive", i + 1)));
        }
        Ok(Self { network, targets, caps, benefit: BenefitSpec::Logarithmic })
    }

    /// Game with every cap unbounded.
    pub fn unbounded(network: Network<T>, targets: Vec<T>) -> Result<Self> {
        let n = network.n();
        Self::new(network, targets, vec![Cap::Unbounded; n])
    }

    fn first_cap_violation(&self) -> Option<usize> {
        self.targets.iter().zip(&self.caps).position(|(t, c)| match c {
            Cap::Finite(v) => t >= v,
            Cap::Unbounded => false,
        })
    }

    /// Whether every target lies strictly inside its action set.
    pub fn has_interior_targets(&self) -> bool {
        self.first_cap_violation().is_none()
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    pub fn network(&self) -> &Network<T> {
        &self.network
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn caps(&self) -> &[Cap<T>] {
        &self.caps
    }

    pub fn benefit(&self) -> BenefitSpec {
        self.benefit
    }

    pub fn with_network(&self, network: Network<T>) -> Result<Self> {
        Self::relaxed(network, self.targets.clone(), self.caps.clone())
    }

    pub fn with_caps(&self, caps: Vec<Cap<T>>) -> Result<Self> {
        Self::relaxed(self.network.clone(), self.targets.clone(), caps)
    }

    pub fn to_f64(&self) -> Game<f64> {
        Game {
            network: self.network.to_f64(),
            targets: self.targets.iter().map(Scalar::to_f64).collect(),
            caps: self.caps.iter().map(Cap::to_f64).collect(),
            benefit: self.benefit,
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.n() && x.iter().zip(&self.caps).all(|(v, c)| *v >= T::zero() && c.admits(v))
    }

    /// `Σ_j w_ij x_j` including the own term.
    pub fn aggregate(&self, x: &[T], i: usize) -> T {
        self.network.row(i).iter().zip(x).fold(T::zero(), |acc, (w, v)| acc + w.clone() * v.clone())
    }

    /// `t_i - Σ_{j≠i} w_ij x_j`, unclamped.
    pub fn unconstrained_best_response(&self, x: &[T], i: usize) -> T {
        let row = self.network.row(i);
        let mut value = self.targets[i].clone();
        for (j, (w, v)) in row.iter().zip(x).enumerate() {
            if j != i && !w.is_zero() {
                value = value - w.clone() * v.clone();
            }
        }
        value
    }

    /// Best response of player `i`: the unconstrained value clamped to the
    /// action set.
    pub fn best_response(&self, x: &[T], i: usize) -> T {
        self.caps[i].clamp(self.unconstrained_best_response(x, i))
    }

    pub fn best_response_profile(&self, x: &[T]) -> Profile<T> {
        Profile((0..self.n()).map(|i| self.best_response(x, i)).collect())
    }

    /// `max_i |x_i - b_i(x)|`.
    pub fn residual(&self, x: &[T]) -> T {
        (0..self.n()).fold(T::zero(), |acc, i| {
            let gap = (x[i].clone() - self.best_response(x, i)).abs();
            if gap > acc {
                gap
            } else {
                acc
            }
        })
    }

    /// Nash test: every player within `tol` of its best response. `tol == 0`
    /// compares exactly.
    pub fn is_nash(&self, x: &[T], tol: f64) -> bool {
        let residual = self.residual(x);
        residual.is_zero() || (tol > 0.0 && residual.to_f64() <= tol)
    }

    /// Payoff `f_i(Σ_j w_ij x_j) - c_i x_i`. The aggregate is formed in the
    /// game's arithmetic; only the logarithm is evaluated in floating point.
    pub fn payoff(&self, x: &[T], i: usize) -> Result<f64> {
        let aggregate = self.aggregate(x, i);
        if T::one() + aggregate.clone() <= T::zero() {
            return Err(Error::Domain { player: i, argument: 1.0 + aggregate.to_f64() });
        }
        let benefit = self.benefit.benefit(aggregate.to_f64()).ok_or(Error::Domain {
            player: i,
            argument: 1.0 + aggregate.to_f64(),
        })?;
        let cost = self.benefit.cost(&self.targets[i]) * x[i].clone();
        Ok(benefit - cost.to_f64())
    }
}

impl Game<f64> {
    pub fn to_rational(&self) -> Game<Rational> {
        Game {
            network: self.network.to_rational(),
            targets: self.targets.iter().map(|t| Rational::from_f64(*t).unwrap()).collect(),
            caps: self
                .caps
                .iter()
                .map(|c| match c {
                    Cap::Finite(v) => Cap::Finite(Rational::from_f64(*v).unwrap()),
                    Cap::Unbounded => Cap::Unbounded,
                })
                .collect(),
            benefit: self.benefit,
        }
    }
}
