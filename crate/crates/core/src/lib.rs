//! Directed network public-goods games: best-response dynamics, network
//! classification and rescaling, equilibrium computation, best-response
//! potentials and random-network cycle experiments.

// dense matrix code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod catalog;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod io;
pub mod linalg;
pub mod potential;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use game::{BenefitSpec, Cap, Game, Network, Profile};
pub use scalar::{Rational, Scalar};
pub use analysis::{classify, ClassificationReport};
pub use dynamics::{run, DynamicSpec, RunOptions, Schedule, Trajectory, Verdict};
pub use equilibrium::{solve_enumerate, EquilibriumSet};
pub use io::GameDocument;
pub use potential::PotentialSpec;
pub use random::{CycleWitness, RandomWeightModel};
