//! Nash equilibria: exhaustive boundary-pattern enumeration for small games
//! and contraction iteration under a dominance witness.

use std::fmt;

use rayon::prelude::*;

use crate::analysis::scaling::{contraction_factor, ScalingVector};
use crate::analysis::spectral::{spectral_radius_abs, SpectralOptions};
use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use crate::linalg::{solve, Solution};
use crate::scalar::{Rational, Scalar};

/// Largest player count accepted by [`solve_enumerate`].
pub const ENUMERATION_MAX_N: usize = 12;

/// Where a coordinate sits relative to its action set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Zero,
    Interior,
    Cap,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Zero => "zero",
            Boundary::Interior => "interior",
            Boundary::Cap => "cap",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium<T> {
    pub profile: Profile<T>,
    pub pattern: Vec<Boundary>,
    /// `max_i |x_i - b_i(x)|`.
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet<T> {
    pub equilibria: Vec<Equilibrium<T>>,
    /// Every pattern was examined.
    pub complete: bool,
    /// Some pattern's interior block is singular with a consistent
    /// right-hand side.
    pub degenerate_continuum: bool,
}

impl<T: Scalar> EquilibriumSet<T> {
    pub fn len(&self) -> usize {
        self.equilibria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty()
    }

    pub fn profiles(&self) -> impl Iterator<Item = &Profile<T>> {
        self.equilibria.iter().map(|e| &e.profile)
    }
}

enum PatternOutcome<T> {
    Nothing,
    Found(Equilibrium<T>),
    Continuum,
}

fn decode(mut index: usize, n: usize) -> Vec<Boundary> {
    (0..n)
        .map(|_| {
            let b = match index % 3 {
                0 => Boundary::Zero,
                1 => Boundary::Interior,
                _ => Boundary::Cap,
            };
            index /= 3;
            b
        })
        .collect()
}

fn leq<T: Scalar>(a: &T, b: &T, tol: f64) -> bool {
    *a <= *b || (tol > 0.0 && (a.clone() - b.clone()).to_f64() <= tol)
}

/// Solves the pattern's linear system and checks its clamping conditions.
fn solve_pattern<T: Scalar>(game: &Game<T>, pattern: &[Boundary], tol: f64) -> PatternOutcome<T> {
    let n = game.n();
    let w = game.network();
    let mut x = vec![T::zero(); n];
    for (i, b) in pattern.iter().enumerate() {
        if *b == Boundary::Cap {
            match game.caps()[i].finite() {
                Some(c) => x[i] = c.clone(),
                None => return PatternOutcome::Nothing,
            }
        }
    }
    let interior: Vec<usize> = (0..n).filter(|&i| pattern[i] == Boundary::Interior).collect();
    if !interior.is_empty() {
        let k = interior.len();
        let mut a = Vec::with_capacity(k * k);
        let mut rhs = Vec::with_capacity(k);
        for &i in &interior {
            a.extend(interior.iter().map(|&j| w.get(i, j).clone()));
            let boundary = (0..n)
                .filter(|&j| pattern[j] != Boundary::Interior)
                .fold(T::zero(), |s, j| s + w.get(i, j).clone() * x[j].clone());
            rhs.push(game.targets()[i].clone() - boundary);
        }
        match solve(a, rhs) {
            Solution::Unique(sol) => {
                for (&i, v) in interior.iter().zip(sol) {
                    x[i] = v;
                }
            }
            Solution::Singular { consistent: true } => return PatternOutcome::Continuum,
            Solution::Singular { consistent: false } => return PatternOutcome::Nothing,
        }
    }
    for i in 0..n {
        let ok = match pattern[i] {
            Boundary::Interior => {
                leq(&T::zero(), &x[i], tol)
                    && game.caps()[i].finite().is_none_or(|c| leq(&x[i], c, tol))
            }
            Boundary::Zero => leq(&game.unconstrained_best_response(&x, i), &T::zero(), tol),
            Boundary::Cap => {
                let c = game.caps()[i].finite().unwrap();
                leq(c, &game.unconstrained_best_response(&x, i), tol)
            }
        };
        if !ok {
            return PatternOutcome::Nothing;
        }
    }
    for (i, cap) in game.caps().iter().enumerate() {
        x[i] = cap.clamp(x[i].clone());
    }
    let residual = game.residual(&x);
    if !leq(&residual, &T::zero(), tol) {
        return PatternOutcome::Nothing;
    }
    PatternOutcome::Found(Equilibrium { profile: Profile(x), pattern: pattern.to_vec(), residual })
}

/// Every Nash equilibrium of a game with at most [`ENUMERATION_MAX_N`]
/// players, by examining all `3^n` zero/interior/cap patterns. `tol` is the
/// pattern-consistency and deduplication tolerance (`0` is exact).
pub fn solve_enumerate<T: Scalar>(game: &Game<T>, tol: f64) -> Result<EquilibriumSet<T>> {
    let n = game.n();
    if n > ENUMERATION_MAX_N {
        return Err(Error::Size { n, max: ENUMERATION_MAX_N });
    }
    let total = 3usize.pow(n as u32);
    let outcomes: Vec<PatternOutcome<T>> =
        (0..total).into_par_iter().map(|p| solve_pattern(game, &decode(p, n), tol)).collect();

    let mut set = EquilibriumSet { equilibria: Vec::new(), complete: true, degenerate_continuum: false };
    for outcome in outcomes {
        match outcome {
            PatternOutcome::Nothing => {}
            PatternOutcome::Continuum => set.degenerate_continuum = true,
            PatternOutcome::Found(eq) => {
                let duplicate = set.equilibria.iter().any(|e| {
                    e.profile.iter().zip(eq.profile.iter()).all(|(a, b)| crate::scalar::within(a, b, tol))
                });
                if !duplicate {
                    set.equilibria.push(eq);
                }
            }
        }
    }
    Ok(set)
}

/// Boundary pattern of a profile, reading coordinates within `tol` of 0 or
/// the cap as boundary.
pub fn pattern_of<T: Scalar>(game: &Game<T>, x: &[T], tol: f64) -> Vec<Boundary> {
    x.iter()
        .zip(game.caps())
        .map(|(v, cap)| {
            if leq(v, &T::zero(), tol) {
                Boundary::Zero
            } else if cap.finite().is_some_and(|c| leq(c, v, tol)) {
                Boundary::Cap
            } else {
                Boundary::Interior
            }
        })
        .collect()
}

/// Exact equilibrium whose pattern is read off a floating approximation.
pub fn refine_exact(game: &Game<Rational>, approx: &[f64], tol: f64) -> Option<Equilibrium<Rational>> {
    let approx: Vec<Rational> = approx.iter().map(|v| Rational::from_f64(*v)).collect::<Option<_>>()?;
    let pattern = pattern_of(game, &approx, tol);
    match solve_pattern(game, &pattern, 0.0) {
        PatternOutcome::Found(eq) => Some(eq),
        _ => None,
    }
}

/// `max_i a_i |x_i - b_i(x)|`: the residual in the weighted maximum norm
/// with weights `a⁻¹`.
pub fn weighted_residual<T: Scalar>(game: &Game<T>, x: &[T], scaling: &ScalingVector<f64>) -> f64 {
    (0..game.n())
        .map(|i| (x[i].clone() - game.best_response(x, i)).abs().to_f64() * scaling.values()[i])
        .fold(0.0, f64::max)
}

/// Round-robin BRD from `x0` until the weighted residual is at most `tol`.
/// `witness` must make the rescaled network weakly influenced.
pub fn solve_contraction<T: Scalar>(
    game: &Game<T>,
    x0: &Profile<T>,
    witness: Option<&ScalingVector<f64>>,
    tol: f64,
    max_passes: usize,
) -> Result<Profile<T>> {
    let a = witness.ok_or_else(|| Error::Precondition("a weak-influences scaling is required".into()))?;
    if a.len() != game.n() {
        return Err(Error::Precondition("scaling length does not match the game".into()));
    }
    let gamma = contraction_factor(&game.network().to_f64(), a);
    if gamma.is_nan() || gamma >= 1.0 {
        return Err(Error::Precondition(format!("scaling gives contraction factor {gamma} >= 1")));
    }
    if !game.contains(x0) {
        return Err(Error::Precondition(format!("initial profile {x0} is outside the action set")));
    }
    let mut x = x0.clone();
    for _ in 0..=max_passes {
        if weighted_residual(game, &x, a) <= tol {
            return Ok(x);
        }
        for i in 0..game.n() {
            x[i] = game.best_response(&x, i);
        }
    }
    Err(Error::NonConvergence {
        iterations: max_passes,
        detail: format!("weighted residual {} above {tol}", weighted_residual(game, &x, a)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Uniqueness<T> {
    /// `ρ(|W| - I) < 1`.
    Spectral { rho_upper: f64 },
    /// Counted by enumeration.
    Enumerated(EquilibriumSet<T>),
    Unknown,
}

impl<T: Scalar> Uniqueness<T> {
    pub fn is_unique(&self) -> Option<bool> {
        match self {
            Uniqueness::Spectral { .. } => Some(true),
            Uniqueness::Enumerated(set) => Some(set.len() == 1 && !set.degenerate_continuum),
            Uniqueness::Unknown => None,
        }
    }
}

pub fn check_uniqueness<T: Scalar>(game: &Game<T>, tol: f64) -> Uniqueness<T> {
    if let Ok(rho) = spectral_radius_abs(game.network(), &SpectralOptions::default()) {
        if rho.upper < 1.0 {
            return Uniqueness::Spectral { rho_upper: rho.upper };
        }
    }
    match solve_enumerate(game, tol) {
        Ok(set) => Uniqueness::Enumerated(set),
        Err(_) => Uniqueness::Unknown,
    }
}
