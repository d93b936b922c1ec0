//! Best-response potentials: the symmetric quadratic, its rescaled form for
//! symmetrizable networks, and the weighted-L1 potential for networks with a
//! weak-externalities scaling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::scaling::ScalingVector;
use crate::analysis::structure::SymmetrizeWitness;
use crate::error::{Error, Result};
use crate::game::{Cap, Game, Profile};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec<T> {
    SymmetricQuadratic,
    RescaledQuadratic(SymmetrizeWitness<T>),
    WeightedL1(ScalingVector<T>),
}

impl<T: Scalar> PotentialSpec<T> {
    /// Checks the spec's precondition on `game`. `tol` applies to the
    /// symmetry checks (`0` is exact).
    pub fn validate(&self, game: &Game<T>, tol: f64) -> Result<()> {
        match self {
            PotentialSpec::SymmetricQuadratic => {
                let w = game.network();
                let n = w.n();
                let symmetric =
                    (0..n).all(|i| (0..i).all(|j| crate::scalar::within(w.get(i, j), w.get(j, i), tol)));
                if symmetric {
                    Ok(())
                } else {
                    Err(Error::Precondition("the symmetric quadratic needs a symmetric network".into()))
                }
            }
            PotentialSpec::RescaledQuadratic(witness) => {
                if witness.verifies(game.network(), tol) {
                    Ok(())
                } else {
                    Err(Error::Precondition("scaling does not symmetrize the network".into()))
                }
            }
            PotentialSpec::WeightedL1(a) => check_externality_witness(game, a),
        }
    }

    /// Value at `x` without checking the precondition.
    pub fn evaluate_unchecked(&self, game: &Game<T>, x: &[T]) -> T {
        match self {
            PotentialSpec::SymmetricQuadratic => quadratic(game, x, None),
            PotentialSpec::RescaledQuadratic(witness) => quadratic(game, x, Some(witness.squared())),
            PotentialSpec::WeightedL1(a) => weighted_l1(game, a, x),
        }
    }

    pub fn evaluate(&self, game: &Game<T>, x: &[T], tol: f64) -> Result<T> {
        self.validate(game, tol)?;
        Ok(self.evaluate_unchecked(game, x))
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialSpec::SymmetricQuadratic => "symmetric-quadratic",
            PotentialSpec::RescaledQuadratic(_) => "rescaled-quadratic",
            PotentialSpec::WeightedL1(_) => "weighted-l1",
        }
    }
}

/// `Σ s_i x_i t_i - ½ Σ_ij s_i w_ij x_i x_j` with `s = 1` when `squared` is
/// absent.
fn quadratic<T: Scalar>(game: &Game<T>, x: &[T], squared: Option<&[T]>) -> T {
    let w = game.network();
    let n = game.n();
    let two = T::one() + T::one();
    let mut linear = T::zero();
    let mut quad = T::zero();
    for i in 0..n {
        let s = squared.map_or_else(T::one, |s| s[i].clone());
        linear = linear + s.clone() * x[i].clone() * game.targets()[i].clone();
        let row = (0..n).fold(T::zero(), |acc, j| acc + w.get(i, j).clone() * x[j].clone());
        quad = quad + s * x[i].clone() * row;
    }
    linear - quad / two
}

fn weighted_l1<T: Scalar>(game: &Game<T>, a: &ScalingVector<T>, x: &[T]) -> T {
    (0..game.n()).fold(T::zero(), |acc, i| {
        acc - a.values()[i].clone() * (x[i].clone() - game.best_response(x, i)).abs()
    })
}

fn check_externality_witness<T: Scalar>(game: &Game<T>, a: &ScalingVector<T>) -> Result<()> {
    let w = game.network();
    let n = w.n();
    if a.len() != n {
        return Err(Error::Precondition("scaling length does not match the game".into()));
    }
    for j in 0..n {
        let inflow = (0..n)
            .filter(|&i| i != j)
            .fold(T::zero(), |s, i| s + a.values()[i].clone() * w.get(i, j).abs());
        if inflow >= a.values()[j] {
            return Err(Error::Precondition(format!(
                "scaling is not a weak-externalities witness at player {}",
                j + 1
            )));
        }
    }
    Ok(())
}

/// `xᵀt - ½ xᵀWx`; the network must be symmetric.
pub fn eval_symmetric_quadratic<T: Scalar>(game: &Game<T>, x: &[T]) -> Result<T> {
    PotentialSpec::SymmetricQuadratic.evaluate(game, x, 0.0)
}

/// The quadratic potential in rescaled units, `Σ a_i² x_i t_i - ½ Σ a_i² w_ij
/// x_i x_j`. The witness is checked within `tol`.
pub fn eval_rescaled_quadratic<T: Scalar>(
    game: &Game<T>,
    witness: &SymmetrizeWitness<T>,
    x: &[T],
    tol: f64,
) -> Result<T> {
    if !witness.verifies(game.network(), tol) {
        return Err(Error::Precondition("scaling does not symmetrize the network".into()));
    }
    Ok(quadratic(game, x, Some(witness.squared())))
}

/// Analytic gradient of the rescaled quadratic: `a_i² (t_i - Σ_j w_ij x_j)`.
pub fn rescaled_quadratic_gradient<T: Scalar>(game: &Game<T>, witness: &SymmetrizeWitness<T>, x: &[T]) -> Vec<T> {
    (0..game.n())
        .map(|i| witness.squared()[i].clone() * (game.targets()[i].clone() - game.aggregate(x, i)))
        .collect()
}

/// `-Σ a_i |x_i - b_i(x)|`; `a` must satisfy `Σ_{i≠j} a_i |w_ij| < a_j`.
pub fn eval_weighted_l1<T: Scalar>(game: &Game<T>, a: &ScalingVector<T>, x: &[T]) -> Result<T> {
    check_externality_witness(game, a)?;
    Ok(weighted_l1(game, a, x))
}

/// Deviation above which a sampled coordinate maximizer counts as a
/// counterexample.
pub const VERIFY_RESOLUTION: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub profile: Profile<f64>,
    pub player: usize,
    pub maximizer: f64,
    pub best_response: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCheck {
    pub samples: usize,
    pub max_deviation: f64,
    /// First failing sample in sample order.
    pub counterexample: Option<Counterexample>,
}

/// Samples profiles and players and checks that the potential's coordinate
/// maximizer (grid search, then golden-section refinement to `1e-8`)
/// coincides with the best response. Unbounded action sets are searched on
/// `[0, 4 max t + 1]`.
pub fn verify_br_potential(
    game: &Game<f64>,
    potential: &PotentialSpec<f64>,
    sample_count: usize,
    grid_size: usize,
    seed: u64,
) -> Result<PotentialCheck> {
    if grid_size < 3 {
        return Err(Error::Config("grid_size must be at least 3".into()));
    }
    let n = game.n();
    let fallback = 4.0 * game.targets().iter().cloned().fold(0.0, f64::max) + 1.0;
    let hi: Vec<f64> = game
        .caps()
        .iter()
        .map(|c| match c {
            Cap::Finite(v) => *v,
            Cap::Unbounded => fallback,
        })
        .collect();

    let outcomes: Vec<(f64, Option<Counterexample>)> = (0..sample_count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let x: Vec<f64> = hi.iter().map(|h| rng.random_range(0.0..=*h)).collect();
            let i = rng.random_range(0..n);
            let f = |v: f64| {
                let mut y = x.clone();
                y[i] = v;
                potential.evaluate_unchecked(game, &y)
            };
            let maximizer = coordinate_argmax(&f, hi[i], grid_size);
            let b = game.best_response(&x, i).min(hi[i]);
            let deviation = (maximizer - b).abs();
            let counterexample = (deviation > VERIFY_RESOLUTION).then(|| Counterexample {
                profile: Profile(x.clone()),
                player: i,
                maximizer,
                best_response: b,
            });
            (deviation, counterexample)
        })
        .collect();

    Ok(PotentialCheck {
        samples: sample_count,
        max_deviation: outcomes.iter().map(|o| o.0).fold(0.0, f64::max),
        counterexample: outcomes.into_iter().find_map(|o| o.1),
    })
}

fn coordinate_argmax(f: &impl Fn(f64) -> f64, hi: f64, grid_size: usize) -> f64 {
    let step = hi / (grid_size - 1) as f64;
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for k in 0..grid_size {
        let v = f(k as f64 * step);
        if v > best_value {
            best_value = v;
            best = k;
        }
    }
    let mut lo = best.saturating_sub(1) as f64 * step;
    let mut up = ((best + 1).min(grid_size - 1)) as f64 * step;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = up - ratio * (up - lo);
    let mut d = lo + ratio * (up - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while up - lo > 1e-8 {
        if fc >= fd {
            up = d;
            d = c;
            fd = fc;
            c = up - ratio * (up - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (up - lo);
            fd = f(d);
        }
    }
    // the refined point must not lose to the best grid point (flat or kinked
    // restrictions)
    let refined = (lo + up) / 2.0;
    if f(refined) >= best_value {
        refined
    } else {
        best as f64 * step
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::symmetrize;
    use crate::catalog;
    use crate::game::Network;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn sym_game() -> Game<Rational> {
        let w = Network::from_rows(&[vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]).unwrap();
        Game::unbounded(w, vec![q(1, 1), q(1, 1)]).unwrap()
    }

    #[test]
    fn symmetric_quadratic_examples() {
        let game = sym_game();
        assert_eq!(eval_symmetric_quadratic(&game, &[q(0, 1), q(0, 1)]).unwrap(), q(0, 1));
        assert_eq!(eval_symmetric_quadratic(&game, &[q(1, 2), q(1, 2)]).unwrap(), q(1, 2));
        let id = Game::unbounded(Network::identity(2), vec![q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(eval_symmetric_quadratic(&id, &[q(2, 1), q(3, 1)]).unwrap(), q(13, 2));
        assert!(eval_symmetric_quadratic(&catalog::directed_three_cycle::<Rational>(), &vec![q(0, 1); 3]).is_err());
    }

    #[test]
    fn rescaled_quadratic_examples() {
        let w = Network::from_rows(&[vec![q(1, 1), q(2, 1)], vec![q(1, 2), q(1, 1)]]).unwrap();
        let game = Game::unbounded(w, vec![q(1, 1), q(1, 1)]).unwrap();
        let witness = symmetrize(game.network(), 0.0).unwrap();
        assert_eq!(eval_rescaled_quadratic(&game, &witness, &[q(1, 1), q(1, 1)], 0.0).unwrap(), q(1, 2));
        assert_eq!(eval_rescaled_quadratic(&game, &witness, &[q(0, 1), q(0, 1)], 0.0).unwrap(), q(0, 1));
        let ones = SymmetrizeWitness::from_scaling(&ScalingVector::ones(2));
        assert!(eval_rescaled_quadratic(&game, &ones, &[q(0, 1), q(0, 1)], 0.0).is_err());

        let game = sym_game();
        let x = [q(1, 3), q(5, 7)];
        assert_eq!(
            eval_rescaled_quadratic(&game, &ones, &x, 0.0).unwrap(),
            eval_symmetric_quadratic(&game, &x).unwrap()
        );
    }

    #[test]
    fn weighted_l1_examples() {
        let game = catalog::weighted_three_cycle(q(1, 2));
        let ones = ScalingVector::ones(3);
        assert_eq!(eval_weighted_l1(&game, &ones, &[q(1, 1), q(0, 1), q(0, 1)]).unwrap(), q(-3, 2));
        assert_eq!(eval_weighted_l1(&game, &ones, &vec![q(2, 3); 3]).unwrap(), q(0, 1));
        let id = Game::unbounded(Network::identity(2), vec![q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(eval_weighted_l1(&id, &ScalingVector::ones(2), &[q(3, 1), q(0, 1)]).unwrap(), q(-4, 1));
        let cycle = catalog::directed_three_cycle::<Rational>();
        assert!(eval_weighted_l1(&cycle, &ones, &vec![q(0, 1); 3]).is_err());
    }

    #[test]
    fn verification_examples() {
        let w = Network::from_rows(&[vec![1.0, 0.4, -0.3], vec![0.4, 1.0, 0.2], vec![-0.3, 0.2, 1.0]]).unwrap();
        let game = Game::new(w, vec![1.0, 0.5, 2.0], vec![Cap::Finite(3.0); 3]).unwrap();
        let check = verify_br_potential(&game, &PotentialSpec::SymmetricQuadratic, 200, 101, 1).unwrap();
        assert!(check.counterexample.is_none(), "{check:?}");

        let game = catalog::weighted_three_cycle(0.5);
        let spec = PotentialSpec::WeightedL1(ScalingVector::ones(3));
        let check = verify_br_potential(&game, &spec, 200, 101, 2).unwrap();
        assert!(check.counterexample.is_none(), "{check:?}");

        let parasite = catalog::host_parasite::<f64>(Cap::Finite(2.0), Cap::Finite(2.0));
        let check = verify_br_potential(&parasite, &spec_ones(2), 500, 101, 3).unwrap();
        assert!(check.counterexample.is_some());
    }

    fn spec_ones(n: usize) -> PotentialSpec<f64> {
        PotentialSpec::WeightedL1(ScalingVector::ones(n))
    }
}
