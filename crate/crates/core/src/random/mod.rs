//! Random networks and the cycle witnesses they contain with high
//! probability.

pub mod model;
pub mod sweep;
pub mod witness;

pub use model::{model_probabilities, sample_network, sample_pair, PairKind, RandomWeightModel, WeightDist};
pub use sweep::{analytic_lower_bound, estimate_cycle_probability, trial_has_witness, wilson_interval, SweepRow};
pub use witness::{
    find_parasite_witness, find_three_group_witness, required_group_size, required_group_size_parasite,
    CycleWitness, WitnessPattern,
};
