//! Single revisions under BRD, BRAD and BRCD, and the audit of a revision
//! against the defining inequalities.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// How a BRCD revision chooses the side of the best response it lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Overshoot {
    Fixed(Sign),
    /// Alternates starting with `Plus`, one flip per BRCD revision.
    #[default]
    Alternating,
    /// Fair coin from the run's generator.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicSpec<T> {
    Brd,
    /// Moves to `b + λβ(x_i - b)`.
    Brad { beta: T, lambda: T },
    /// Moves to `b ± λα|x_i - b|`, clamped to the action set.
    Brcd { alpha: T, lambda: T, overshoot: Overshoot },
}

impl<T: Scalar> DynamicSpec<T> {
    pub fn brad(beta: T) -> Self {
        DynamicSpec::Brad { beta, lambda: T::one() }
    }

    pub fn brcd(alpha: T) -> Self {
        DynamicSpec::Brcd { alpha, lambda: T::one(), overshoot: Overshoot::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: &T| *v >= T::zero() && *v < T::one();
        let step = |v: &T| *v >= T::zero() && *v <= T::one();
        match self {
            DynamicSpec::Brd => Ok(()),
            DynamicSpec::Brad { beta, lambda } if unit(beta) && step(lambda) => Ok(()),
            DynamicSpec::Brcd { alpha, lambda, .. } if unit(alpha) && step(lambda) => Ok(()),
            _ => Err(Error::Config(format!(
                "{self}: approach/centering parameter must lie in [0, 1) and step fraction in [0, 1]"
            ))),
        }
    }

    /// The inequality family this dynamic belongs to.
    pub fn rule(&self) -> UpdateRule<T> {
        match self {
            DynamicSpec::Brd => UpdateRule::Brd,
            DynamicSpec::Brad { beta, .. } => UpdateRule::Brad { beta: beta.clone() },
            DynamicSpec::Brcd { alpha, .. } => UpdateRule::Brcd { alpha: alpha.clone() },
        }
    }

    pub fn to_f64(&self) -> DynamicSpec<f64> {
        match self {
            DynamicSpec::Brd => DynamicSpec::Brd,
            DynamicSpec::Brad { beta, lambda } => DynamicSpec::Brad { beta: beta.to_f64(), lambda: lambda.to_f64() },
            DynamicSpec::Brcd { alpha, lambda, overshoot } => {
                DynamicSpec::Brcd { alpha: alpha.to_f64(), lambda: lambda.to_f64(), overshoot: *overshoot }
            }
        }
    }
}

impl<T: Scalar> fmt::Display for DynamicSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicSpec::Brd => write!(f, "brd"),
            DynamicSpec::Brad { beta, lambda } => write!(f, "brad(beta={beta},lambda={lambda})"),
            DynamicSpec::Brcd { alpha, lambda, overshoot } => {
                let rule = match overshoot {
                    Overshoot::Fixed(Sign::Plus) => "plus",
                    Overshoot::Fixed(Sign::Minus) => "minus",
                    Overshoot::Alternating => "alternating",
                    Overshoot::Random => "random",
                };
                write!(f, "brcd(alpha={alpha},lambda={lambda},overshoot={rule})")
            }
        }
    }
}

/// Revision state carried across periods (the alternating overshoot sign).
#[derive(Debug, Clone)]
pub struct Stepper<T> {
    spec: DynamicSpec<T>,
    next_sign: Sign,
}

impl<T: Scalar> Stepper<T> {
    pub fn new(spec: DynamicSpec<T>) -> Self {
        Self { spec, next_sign: Sign::Plus }
    }

    pub fn spec(&self) -> &DynamicSpec<T> {
        &self.spec
    }

    /// New value of player `i` and the best response it was computed from.
    pub fn revise<R: Rng + ?Sized>(&mut self, game: &Game<T>, x: &[T], i: usize, rng: &mut R) -> (T, T) {
        let b = game.best_response(x, i);
        let value = match &self.spec {
            DynamicSpec::Brd => b.clone(),
            DynamicSpec::Brad { beta, lambda } => {
                b.clone() + lambda.clone() * beta.clone() * (x[i].clone() - b.clone())
            }
            DynamicSpec::Brcd { alpha, lambda, overshoot } => {
                let sign = match overshoot {
                    Overshoot::Fixed(s) => *s,
                    Overshoot::Alternating => {
                        let s = self.next_sign;
                        self.next_sign = s.flip();
                        s
                    }
                    Overshoot::Random => {
                        if rng.random_bool(0.5) {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        }
                    }
                };
                let offset = lambda.clone() * alpha.clone() * (x[i].clone() - b.clone()).abs();
                let raw = match sign {
                    Sign::Plus => b.clone() + offset,
                    Sign::Minus => b.clone() - offset,
                };
                game.caps()[i].clamp(raw)
            }
        };
        (value, b)
    }
}

/// One revision of player `i` from `x`. Alternating overshoot starts from
/// its first sign; use [`Stepper`] to carry it across periods.
pub fn step<T: Scalar, R: Rng + ?Sized>(
    game: &Game<T>,
    x: &Profile<T>,
    i: usize,
    spec: &DynamicSpec<T>,
    rng: &mut R,
) -> Profile<T> {
    let (value, _) = Stepper::new(spec.clone()).revise(game, x, i, rng);
    x.with(i, value)
}

/// Defining inequality of a dynamic, without the picker details.
#[derive(Debug, Clone, PartialEq)]
pub enum UpdateRule<T> {
    Brd,
    Brad { beta: T },
    Brcd { alpha: T },
}

/// Checks one recorded revision: only coordinate `i` moved, and it obeys
/// the rule relative to the best response `b`. `tol` loosens every
/// comparison (`0` is exact).
pub fn validate_update<T: Scalar>(
    before: &[T],
    after: &[T],
    i: usize,
    b: &T,
    rule: &UpdateRule<T>,
    tol: f64,
) -> bool {
    if before.len() != after.len() || i >= before.len() {
        return false;
    }
    if (0..before.len()).any(|j| j != i && before[j] != after[j]) {
        return false;
    }
    let leq = |lhs: T, rhs: T| lhs <= rhs || (tol > 0.0 && (lhs - rhs).to_f64() <= tol);
    let new_gap = after[i].clone() - b.clone();
    let old_gap = before[i].clone() - b.clone();
    match rule {
        UpdateRule::Brd => leq(new_gap.abs(), T::zero()),
        UpdateRule::Brad { beta } => {
            let shrinks = leq(new_gap.abs(), beta.clone() * old_gap.abs());
            let at_target = leq(new_gap.abs(), T::zero());
            shrinks && (at_target || new_gap.signum() == old_gap.signum())
        }
        UpdateRule::Brcd { alpha } => leq(new_gap.abs(), alpha.clone() * old_gap.abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn brd_step_on_directed_cycle() {
        let game = catalog::directed_three_cycle::<Rational>();
        let x = Profile(vec![q(1, 1), q(0, 1), q(0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = step(&game, &x, 2, &DynamicSpec::Brd, &mut rng);
        assert_eq!(y.0, vec![q(1, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn brad_and_brcd_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // on the directed cycle, x = (1, 0, 1) gives b_1 = 0 while x_1 = 1
        let game = catalog::directed_three_cycle::<f64>();
        let y = step(&game, &Profile(vec![1.0, 0.0, 1.0]), 0, &DynamicSpec::brad(0.5), &mut rng);
        assert_eq!(y.0, vec![0.5, 0.0, 1.0]);

        // x = (0.5, 0, 1): b_1 = 0, so take the two-player chain for b = 0.5
        let game = Game::relaxed(
            crate::game::Network::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap(),
            vec![1.0, 1.0],
            vec![crate::game::Cap::Finite(2.0); 2],
        )
        .unwrap();
        let spec = DynamicSpec::Brcd { alpha: 0.9, lambda: 1.0, overshoot: Overshoot::Fixed(Sign::Minus) };
        let y = step(&game, &Profile(vec![1.0, 1.0]), 0, &spec, &mut rng);
        assert!((y[0] - 0.05).abs() < 1e-12);
    }

    #[test]
    fn brcd_clamps_into_the_box() {
        let game = catalog::directed_three_cycle::<Rational>();
        let spec = DynamicSpec::Brcd { alpha: q(9, 10), lambda: q(1, 1), overshoot: Overshoot::Fixed(Sign::Plus) };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // b_3 = 1 = cap, overshoot would exceed the cap
        let y = step(&game, &Profile(vec![q(1, 1), q(0, 1), q(0, 1)]), 2, &spec, &mut rng);
        assert_eq!(y[2], q(1, 1));
    }

    #[test]
    fn alternating_overshoot_flips() {
        let game = catalog::weighted_three_cycle::<Rational>(q(1, 2));
        let mut stepper = Stepper::new(DynamicSpec::brcd(q(1, 2)));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = vec![q(1, 1), q(0, 1), q(1, 1)];
        let (first, b) = stepper.revise(&game, &x, 0, &mut rng);
        assert_eq!(b, q(1, 2));
        let (second, _) = stepper.revise(&game, &x, 0, &mut rng);
        assert!(first > b && second < b);
    }

    #[test]
    fn validate_update_examples() {
        let brad = UpdateRule::Brad { beta: 0.5 };
        assert!(validate_update(&[1.0], &[0.4], 0, &0.0, &brad, 0.0));
        assert!(!validate_update(&[1.0], &[-0.1], 0, &0.0, &brad, 0.0));
        assert!(validate_update(&[1.0], &[0.05], 0, &0.5, &UpdateRule::Brcd { alpha: 0.9 }, 1e-12));
        assert!(validate_update(&[1.0], &[0.0], 0, &0.0, &UpdateRule::Brd, 0.0));
        assert!(!validate_update(&[1.0, 0.0], &[0.0, 1.0], 0, &0.0, &UpdateRule::Brd, 0.0));
    }

    #[test]
    fn parameters_are_validated() {
        assert!(DynamicSpec::brad(1.0).validate().is_err());
        assert!(DynamicSpec::Brad { beta: 0.5, lambda: 1.5 }.validate().is_err());
        assert!(DynamicSpec::brcd(0.99).validate().is_ok());
    }
}
