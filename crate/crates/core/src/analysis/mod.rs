//! Network classification and rescaling.

pub mod dan;
pub mod report;
pub mod scaling;
pub mod spectral;
pub mod structure;

pub use dan::{dan_order, dan_scaling};
pub use report::{classify, ClassificationReport, ScalingOutcome};
pub use scaling::{
    contraction_factor, rescale, weighted_max_norm_mat, weighted_max_norm_vec, RescaledNetwork, ScalingVector,
};
pub use spectral::{
    scaling_for_weak_externalities, scaling_for_weak_influences, spectral_radius_abs, SpectralEstimate,
    SpectralOptions,
};
pub use structure::{
    amplifying_links, brute_force_transitive, is_sign_symmetric, is_weak_externalities, is_weak_influences,
    relative_importance, symmetrize, RelativeImportance, SymmetrizeWitness,
};
