//! Small reference games used throughout the tests, the CLI and the
//! benchmarks.

use crate::game::{Cap, Game, Network};
use crate::scalar::Scalar;

fn int<T: Scalar>(v: i64) -> T {
    T::from_ratio(v, 1)
}

/// Three players on a directed cycle (`w_13 = w_21 = w_32 = delta`), unit
/// targets and unit caps.
pub fn weighted_three_cycle<T: Scalar>(delta: T) -> Game<T> {
    let (o, z) = (T::one(), T::zero());
    let d = delta;
    let network = Network::from_rows(&[
        vec![o.clone(), z.clone(), d.clone()],
        vec![d.clone(), o.clone(), z.clone()],
        vec![z, d, o],
    ])
    .expect("unit diagonal");
    Game::relaxed(network, vec![T::one(); 3], vec![Cap::Finite(T::one()); 3]).expect("valid game")
}

/// The unweighted directed three-cycle with unit targets and caps.
pub fn directed_three_cycle<T: Scalar>() -> Game<T> {
    weighted_three_cycle(T::one())
}

/// Host (player 1) and parasite (player 2): `W = [[1, -2], [1/2, 1]]`, unit
/// targets.
pub fn host_parasite<T: Scalar>(host_cap: Cap<T>, parasite_cap: Cap<T>) -> Game<T> {
    let network = Network::from_rows(&[
        vec![T::one(), int(-2)],
        vec![T::from_ratio(1, 2), T::one()],
    ])
    .expect("unit diagonal");
    Game::relaxed(network, vec![T::one(); 2], vec![host_cap, parasite_cap]).expect("valid game")
}

/// Two-player chain where player 2 is affected by player 1 with weight
/// `weight` and nothing else interacts.
pub fn two_chain<T: Scalar>(weight: T) -> Network<T> {
    Network::from_rows(&[vec![T::one(), T::zero()], vec![weight, T::one()]]).expect("unit diagonal")
}
