//! Dense Gaussian elimination over any [`Scalar`].

use crate::scalar::Scalar;

/// Outcome of solving a square system.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    /// The matrix is singular; `consistent` tells whether the right-hand
    /// side lies in its range (a continuum of solutions) or not.
    Singular { consistent: bool },
}

/// Solves `a x = b` for a row-major `n × n` matrix. Floating mode pivots on
/// the largest magnitude; exact mode on the first nonzero entry.
pub fn solve<T: Scalar>(mut a: Vec<T>, mut b: Vec<T>) -> Solution<T> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(n);
    let mut pivot_cols: Vec<usize> = Vec::with_capacity(n);
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let candidate = if T::EXACT {
            (row..n).find(|&r| !a[r * n + col].is_zero())
        } else {
            (row..n)
                .max_by(|&r, &s| {
                    a[r * n + col].abs().partial_cmp(&a[s * n + col].abs()).unwrap()
                })
                .filter(|&r| !a[r * n + col].negligible())
        };
        let Some(p) = candidate else { continue };
        if p != row {
            for c in 0..n {
                a.swap(p * n + c, row * n + c);
            }
            b.swap(p, row);
        }
        let pivot = a[row * n + col].clone();
        for r in (row + 1)..n {
            let factor = a[r * n + col].clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let delta = factor.clone() * a[row * n + c].clone();
                a[r * n + c] = a[r * n + c].clone() - delta;
            }
            b[r] = b[r].clone() - factor * b[row].clone();
        }
        pivot_rows.push(row);
        pivot_cols.push(col);
        row += 1;
    }
    if pivot_cols.len() < n {
        // rows without a pivot reduce to 0 = b_r
        let consistent = (row..n).all(|r| b[r].negligible());
        return Solution::Singular { consistent };
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let (r, c) = (pivot_rows[k], pivot_cols[k]);
        let mut acc = b[r].clone();
        for j in (c + 1)..n {
            acc = acc - a[r * n + j].clone() * x[j].clone();
        }
        x[c] = acc / a[r * n + c].clone();
    }
    Solution::Unique(x)
}
