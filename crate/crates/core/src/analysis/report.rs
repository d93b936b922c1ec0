//! One-shot classification of a network with witnesses for every positive
//! flag.

use crate::analysis::dan::dan_order;
use crate::analysis::scaling::ScalingVector;
use crate::analysis::spectral::{
    scaling_for_weak_externalities, scaling_for_weak_influences, spectral_radius_abs, SpectralEstimate,
    SpectralOptions, DEFAULT_MARGIN,
};
use crate::analysis::structure::{
    amplifying_links, externality_sums, influence_sums, is_sign_symmetric, symmetrize, SymmetrizeWitness,
};
use crate::error::Error;
use crate::game::Network;
use crate::scalar::Scalar;

/// Distance from 1 within which a dominance sum is flagged as a boundary case.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// Outcome of a spectral scaling search.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingOutcome {
    Witness(ScalingVector<f64>),
    None,
    Indeterminate,
}

impl ScalingOutcome {
    fn from_result(result: crate::Result<Option<ScalingVector<f64>>>) -> Self {
        match result {
            Ok(Some(a)) => ScalingOutcome::Witness(a),
            Ok(None) => ScalingOutcome::None,
            Err(_) => ScalingOutcome::Indeterminate,
        }
    }

    pub fn witness(&self) -> Option<&ScalingVector<f64>> {
        match self {
            ScalingOutcome::Witness(a) => Some(a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationReport<T> {
    pub n: usize,
    pub sign_symmetric: bool,
    pub symmetrizable: Option<SymmetrizeWitness<T>>,
    pub weak_influences: bool,
    pub weak_externalities: bool,
    /// Some row (column) sum lies within [`BOUNDARY_BAND`] of 1.
    pub influences_boundary: bool,
    pub externalities_boundary: bool,
    pub dan: Option<Vec<usize>>,
    pub amplifying_links: Vec<(usize, usize)>,
    pub spectral: Result<SpectralEstimate, String>,
    pub influence_scaling: ScalingOutcome,
    pub externality_scaling: ScalingOutcome,
}

impl<T: Scalar> ClassificationReport<T> {
    /// Whether the spectral side could not be decided.
    pub fn is_indeterminate(&self) -> bool {
        self.spectral.is_err()
            || matches!(self.influence_scaling, ScalingOutcome::Indeterminate)
            || matches!(self.externality_scaling, ScalingOutcome::Indeterminate)
    }
}

/// Runs every classifier. `tol` is the symmetrization tolerance (`0` for
/// exact checks).
pub fn classify<T: Scalar>(network: &Network<T>, tol: f64) -> ClassificationReport<T> {
    let near_one = |sums: Vec<T>| sums.iter().any(|s| (s.to_f64() - 1.0).abs() <= BOUNDARY_BAND);
    let rows = influence_sums(network);
    let cols = externality_sums(network);
    ClassificationReport {
        n: network.n(),
        sign_symmetric: is_sign_symmetric(network),
        symmetrizable: symmetrize(network, tol),
        weak_influences: rows.iter().all(|s| *s < T::one()),
        weak_externalities: cols.iter().all(|s| *s < T::one()),
        influences_boundary: near_one(rows),
        externalities_boundary: near_one(cols),
        dan: dan_order(network),
        amplifying_links: amplifying_links(network),
        spectral: spectral_radius_abs(network, &SpectralOptions::default()).map_err(|e: Error| e.to_string()),
        influence_scaling: ScalingOutcome::from_result(scaling_for_weak_influences(network, DEFAULT_MARGIN)),
        externality_scaling: ScalingOutcome::from_result(scaling_for_weak_externalities(network, DEFAULT_MARGIN)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::game::Cap;
    use crate::scalar::Rational;

    #[test]
    fn directed_cycle_report() {
        let report = classify(catalog::directed_three_cycle::<Rational>().network(), 0.0);
        assert!(!report.sign_symmetric);
        assert!(report.symmetrizable.is_none());
        assert!(report.dan.is_none());
        assert!(report.influences_boundary && !report.weak_influences);
        let rho = report.spectral.as_ref().unwrap();
        assert!((rho.estimate - 1.0).abs() < 1e-9);
        assert_eq!(report.influence_scaling, ScalingOutcome::None);
    }

    #[test]
    fn parasite_report_lists_amplifying_link() {
        let report = classify(catalog::host_parasite::<f64>(Cap::Unbounded, Cap::Unbounded).network(), 1e-9);
        assert_eq!(report.amplifying_links, vec![(0, 1)]);
        assert!(!report.is_indeterminate());
    }

    #[test]
    fn symmetric_report() {
        let w = Network::from_rows(&[vec![1.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let report = classify(&w, 1e-9);
        assert_eq!(report.symmetrizable.unwrap().scaling().values(), &[1.0, 1.0]);
        assert!(report.influence_scaling.witness().is_some());
    }
}
