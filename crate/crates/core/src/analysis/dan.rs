//! Directed acyclic networks: triangularizing order and the backward
//! recursion that yields a weak-externalities scaling.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::analysis::scaling::ScalingVector;
use crate::error::{Error, Result};
use crate::game::Network;
use crate::scalar::Scalar;

/// Player order under which `W` is lower-triangular, or `None` if the
/// influence graph (edge `j -> i` whenever `w_ij != 0`) has a cycle. Ties go
/// to the smallest index.
pub fn dan_order<T: Scalar>(network: &Network<T>) -> Option<Vec<usize>> {
    let n = network.n();
    let mut indegree = vec![0usize; n];
    for (i, _) in network.links() {
        indegree[i] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(j)) = ready.pop() {
        order.push(j);
        for i in 0..n {
            if i != j && !network.get(i, j).is_zero() {
                indegree[i] -= 1;
                if indegree[i] == 0 {
                    ready.push(Reverse(i));
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Scaling with `a = 1` for the last player in the triangular order and
/// `a_j = margin * (1 + Σ_{k after j} a_k |w_kj|)` going backwards.
pub fn dan_scaling<T: Scalar>(network: &Network<T>, margin: T) -> Result<ScalingVector<T>> {
    if margin < T::one() {
        return Err(Error::Precondition(format!("margin must be at least 1, got {margin}")));
    }
    let order = dan_order(network)
        .ok_or_else(|| Error::Precondition("network is not a directed acyclic network".into()))?;
    let n = network.n();
    let mut a = vec![T::one(); n];
    for p in (0..n.saturating_sub(1)).rev() {
        let j = order[p];
        let downstream = order[p + 1..]
            .iter()
            .fold(T::zero(), |s, &k| s + a[k].clone() * network.get(k, j).abs());
        a[j] = margin.clone() * (T::one() + downstream);
    }
    ScalingVector::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{is_weak_externalities, rescale};
    use crate::catalog;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    #[test]
    fn order_examples() {
        assert_eq!(dan_order(&catalog::two_chain(2.0)), Some(vec![0, 1]));
        let upper = Network::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(dan_order(&upper), Some(vec![2, 1, 0]));
        assert_eq!(dan_order(catalog::directed_three_cycle::<f64>().network()), None);
    }

    #[test]
    fn scaling_examples() {
        let chain = catalog::two_chain(q(2));
        let a = dan_scaling(&chain, q(1)).unwrap();
        assert_eq!(a.values(), &[q(3), q(1)]);
        let v = rescale(&chain, &a).unwrap().rescaled;
        assert_eq!(*v.get(1, 0), Rational::from_ratio(2, 3));

        let three = Network::from_rows(&[
            vec![q(1), q(0), q(0)],
            vec![q(1), q(1), q(0)],
            vec![q(0), q(1), q(1)],
        ])
        .unwrap();
        let a = dan_scaling(&three, q(1)).unwrap();
        assert_eq!(a.values(), &[q(3), q(2), q(1)]);
        assert!(is_weak_externalities(&rescale(&three, &a).unwrap().rescaled));

        let id = Network::<Rational>::identity(3);
        assert_eq!(dan_scaling(&id, q(2)).unwrap().values(), &[q(2), q(2), q(1)]);
        assert!(dan_scaling(catalog::directed_three_cycle::<Rational>().network(), q(1)).is_err());
    }
}
