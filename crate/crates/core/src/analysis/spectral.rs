//! Spectral radius of `M = |W| - I` and the Perron-type scalings that turn a
//! network with `ρ(M) < 1` into one with weak influences or externalities.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::analysis::scaling::{rescale, ScalingVector};
use crate::analysis::structure::{is_weak_externalities, is_weak_influences};
use crate::error::{Error, Result};
use crate::game::Network;
use crate::linalg::{solve, Solution};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Relative agreement required between successive estimates.
    pub rel_tol: f64,
    /// Budget of repeated squarings for the Gelfand iterate.
    pub max_doublings: usize,
    /// Budget of power-iteration steps per irreducible block.
    pub max_power_steps: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_doublings: 200, max_power_steps: 200_000 }
    }
}

/// Bracketed estimate of `ρ(|W| - I)`.
///
/// `lower` is the best Collatz–Wielandt lower bound over the irreducible
/// blocks, `upper` the smaller of their upper bounds and the Gelfand iterate
/// `‖M^k‖∞^{1/k}`. Both hold up to floating rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub gelfand: f64,
}

impl SpectralEstimate {
    pub fn half_width(&self) -> f64 {
        (self.upper - self.lower) / 2.0
    }

    /// `Some(true)` if the whole bracket lies below `level`, `Some(false)` if
    /// it lies at or above, `None` if it straddles.
    pub fn compare_below(&self, level: f64) -> Option<bool> {
        if self.upper < level {
            Some(true)
        } else if self.lower >= level {
            Some(false)
        } else {
            None
        }
    }
}

pub fn spectral_radius_abs<T: Scalar>(network: &Network<T>, options: &SpectralOptions) -> Result<SpectralEstimate> {
    if options.rel_tol <= 0.0 || options.rel_tol.is_nan() {
        return Err(Error::Config("rel_tol must be positive".into()));
    }
    let n = network.n();
    let m = network.abs_off_diagonal();
    let gelfand = gelfand_estimate(&m, n, options)?;

    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (i, j) in network.links() {
        graph.add_edge(nodes[i], nodes[j], ());
    }
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    let mut settled = true;
    for component in tarjan_scc(&graph) {
        let idx: Vec<usize> = component.iter().map(|v| v.index()).collect();
        if idx.len() == 1 {
            continue;
        }
        let (lo, hi, converged) = collatz_wielandt(&m, n, &idx, options);
        lower = lower.max(lo);
        upper = upper.max(hi);
        settled &= converged;
    }
    let upper = upper.min(gelfand).max(lower);
    let scale = upper.max(f64::MIN_POSITIVE);
    if !settled && (upper - lower) > options.rel_tol.sqrt() * scale.max(1.0) {
        return Err(Error::NonConvergence {
            iterations: options.max_power_steps,
            detail: format!("spectral bracket [{lower}, {upper}] still open"),
        });
    }
    Ok(SpectralEstimate { estimate: (lower + upper) / 2.0, lower, upper, gelfand })
}

/// `‖M^k‖∞^{1/k}` with `k = 2^d`, normalizing after each squaring and
/// carrying the scale in logarithms.
fn gelfand_estimate(m: &[f64], n: usize, options: &SpectralOptions) -> Result<f64> {
    let norm = row_norm(m, n);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let mut p: Vec<f64> = m.iter().map(|v| v / norm).collect();
    let mut log_scale = norm.ln();
    let mut power = 1.0f64;
    let mut previous = norm;
    for _ in 0..options.max_doublings {
        let mut sq = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = p[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    sq[i * n + j] += a * p[k * n + j];
                }
            }
        }
        let s = row_norm(&sq, n);
        if s == 0.0 {
            return Ok(0.0);
        }
        p = sq.into_iter().map(|v| v / s).collect();
        log_scale = 2.0 * log_scale + s.ln();
        power *= 2.0;
        let estimate = (log_scale / power).exp();
        if (previous - estimate).abs() <= options.rel_tol * estimate {
            return Ok(estimate);
        }
        previous = estimate;
    }
    Err(Error::NonConvergence {
        iterations: options.max_doublings,
        detail: format!("Gelfand iterate still moving at {previous}"),
    })
}

fn row_norm(m: &[f64], n: usize) -> f64 {
    (0..n).map(|i| m[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Power iteration on `I + B` for the irreducible block `B = M[idx, idx]`,
/// returning the tightest Collatz–Wielandt bracket seen.
fn collatz_wielandt(m: &[f64], n: usize, idx: &[usize], options: &SpectralOptions) -> (f64, f64, bool) {
    let k = idx.len();
    let mut v = vec![1.0; k];
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for _ in 0..options.max_power_steps {
        let w: Vec<f64> = (0..k)
            .map(|a| (0..k).map(|b| m[idx[a] * n + idx[b]] * v[b]).sum())
            .collect();
        let (mut step_lo, mut step_hi) = (f64::INFINITY, 0.0f64);
        for a in 0..k {
            let r = w[a] / v[a];
            step_lo = step_lo.min(r);
            step_hi = step_hi.max(r);
        }
        lo = lo.max(step_lo);
        hi = hi.min(step_hi);
        if hi - lo <= options.rel_tol * hi {
            return (lo, hi, true);
        }
        let mut next: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let top = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= top);
        v = next;
    }
    (lo, hi, false)
}

/// Default margin `ε` for the scaling constructions.
pub const DEFAULT_MARGIN: f64 = 1e-12;

/// Scaling `a` under which the rescaled network has weak influences, if
/// `ρ(|W| - I) < 1 - ε`.
///
/// The positive vector `u` solves `(cI - M) u = 1` for some `c ∈ (ρ, 1]`, so
/// `M u = c u - 1 < u` componentwise; `a = u⁻¹`. Returns `Ok(None)` when the
/// bracket certifies `ρ >= 1 - ε` and [`Error::Indeterminate`] when it
/// straddles that level.
pub fn scaling_for_weak_influences<T: Scalar>(
    network: &Network<T>,
    margin: f64,
) -> Result<Option<ScalingVector<f64>>> {
    let estimate = spectral_radius_abs(network, &SpectralOptions::default())?;
    let level = 1.0 - margin;
    match estimate.compare_below(level) {
        Some(false) => return Ok(None),
        None => return Err(Error::Indeterminate { lower: estimate.lower, upper: estimate.upper }),
        Some(true) => {}
    }
    let n = network.n();
    let m = network.abs_off_diagonal();
    let net = network.to_f64();
    for c in [(1.0 + estimate.upper) / 2.0, 1.0] {
        let a_mat: Vec<f64> = (0..n * n)
            .map(|k| if k / n == k % n { c } else { -m[k] })
            .collect();
        let Solution::Unique(u) = solve(a_mat, vec![1.0; n]) else { continue };
        if u.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            continue;
        }
        let dominated = (0..n).all(|i| (0..n).map(|j| m[i * n + j] * u[j]).sum::<f64>() < u[i]);
        if !dominated {
            continue;
        }
        let a = ScalingVector::new(u.iter().map(|v| 1.0 / v).collect())?.normalized();
        if is_weak_influences(&rescale(&net, &a)?.rescaled) {
            return Ok(Some(a));
        }
    }
    Err(Error::Indeterminate { lower: estimate.lower, upper: estimate.upper })
}

/// Scaling under which the rescaled network has weak externalities: the
/// weak-influences scaling of the transpose, inverted.
pub fn scaling_for_weak_externalities<T: Scalar>(
    network: &Network<T>,
    margin: f64,
) -> Result<Option<ScalingVector<f64>>> {
    let Some(b) = scaling_for_weak_influences(&network.transpose(), margin)? else {
        return Ok(None);
    };
    let a = b.inverse().normalized();
    if is_weak_externalities(&rescale(&network.to_f64(), &a)?.rescaled) {
        Ok(Some(a))
    } else {
        let estimate = spectral_radius_abs(network, &SpectralOptions::default())?;
        Err(Error::Indeterminate { lower: estimate.lower, upper: estimate.upper })
    }
}
