//! Scaling vectors, diagonal similarity rescaling and weighted maximum norms.

use crate::error::{Error, Result};
use crate::game::Network;
use crate::scalar::{Rational, Scalar};

/// Strictly positive vector `a` defining the change of units `y_i = a_i x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector<T>(Vec<T>);

impl<T: Scalar> ScalingVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|a| *a <= T::zero() || !a.is_finite()) {
            return Err(Error::Precondition(format!(
                "scaling entry {} must be positive, found {}",
                i + 1,
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![T::one(); n])
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise inverse `a⁻¹`.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().map(|a| T::one() / a.clone()).collect())
    }

    pub fn to_f64(&self) -> ScalingVector<f64> {
        ScalingVector(self.0.iter().map(Scalar::to_f64).collect())
    }
}

impl ScalingVector<f64> {
    pub fn to_rational(&self) -> ScalingVector<Rational> {
        ScalingVector(self.0.iter().map(|a| Rational::from_f64(*a).unwrap()).collect())
    }

    /// Divides by the largest entry so the vector's maximum is 1.
    pub fn normalized(&self) -> Self {
        let top = self.0.iter().cloned().fold(0.0, f64::max);
        Self(self.0.iter().map(|a| a / top).collect())
    }
}

/// A network expressed in rescaled units: `v_ij = w_ij a_i / a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledNetwork<T> {
    pub base: Network<T>,
    pub scaling: ScalingVector<T>,
    pub rescaled: Network<T>,
}

pub fn rescale<T: Scalar>(network: &Network<T>, scaling: &ScalingVector<T>) -> Result<RescaledNetwork<T>> {
    let n = network.n();
    if scaling.len() != n {
        return Err(Error::Precondition(format!(
            "scaling has {} entries for {n} players",
            scaling.len()
        )));
    }
    let a = scaling.values();
    let weights = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                T::one()
            } else {
                network.get(i, j).clone() * a[i].clone() / a[j].clone()
            }
        })
        .collect();
    Ok(RescaledNetwork {
        base: network.clone(),
        scaling: scaling.clone(),
        rescaled: Network::from_parts_unchecked(n, weights),
    })
}

/// `max_i |v_i| / u_i`.
pub fn weighted_max_norm_vec<T: Scalar>(v: &[T], u: &[T]) -> T {
    v.iter().zip(u).fold(T::zero(), |acc, (x, w)| {
        let term = x.abs() / w.clone();
        if term > acc {
            term
        } else {
            acc
        }
    })
}

/// Induced norm `max_i (1/u_i) Σ_j u_j |m_ij|` of a row-major `n × n` matrix.
pub fn weighted_max_norm_mat<T: Scalar>(m: &[T], u: &[T]) -> T {
    let n = u.len();
    debug_assert_eq!(m.len(), n * n);
    (0..n).fold(T::zero(), |acc, i| {
        let row = (0..n).fold(T::zero(), |s, j| s + u[j].clone() * m[i * n + j].abs());
        let term = row / u[i].clone();
        if term > acc {
            term
        } else {
            acc
        }
    })
}

/// `‖W - I‖` in the weighted maximum norm with weights `a⁻¹`; equals the
/// largest off-diagonal absolute row sum of the rescaled network.
pub fn contraction_factor<T: Scalar>(network: &Network<T>, scaling: &ScalingVector<T>) -> T {
    let n = network.n();
    let m: Vec<T> = (0..n * n)
        .map(|k| if k / n == k % n { T::zero() } else { network.weights()[k].clone() })
        .collect();
    weighted_max_norm_mat(&m, scaling.inverse().values())
}
