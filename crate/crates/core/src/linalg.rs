//! Small dense linear-algebra helpers: norms and LU with partial pivoting.

use ndarray::{Array1, Array2, ArrayView1};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: matrix is {n}x{n}, rhs has length {len}")]
    RhsLength { n: usize, len: usize },
    #[error("matrix is singular to working precision (pivot {pivot:e} at step {step})")]
    Singular { pivot: f64, step: usize },
}

pub fn norm2<S: Scalar>(v: ArrayView1<'_, S>) -> S {
    v.iter().map(|&x| x * x).sum::<S>().sqrt()
}

pub fn norm_inf<S: Scalar>(v: ArrayView1<'_, S>) -> S {
    v.iter().fold(S::zero(), |m, &x| m.max(x.abs()))
}

/// LU factorization with partial pivoting of a square matrix.
pub struct LuFactors<S> {
    lu: Array2<S>,
    perm: Vec<usize>,
    /// Ratio of smallest to largest pivot magnitude; a cheap conditioning proxy.
    pub pivot_ratio: S,
}

pub fn lu_factor<S: Scalar>(a: &Array2<S>) -> Result<LuFactors<S>, LinalgError> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    let n = rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut max_piv = S::zero();
    let mut min_piv = S::infinity();
    for k in 0..n {
        let mut p = k;
        let mut best = lu[[k, k]].abs();
        for i in k + 1..n {
            let mag = lu[[i, k]].abs();
            if mag > best {
                best = mag;
                p = i;
            }
        }
        if best <= S::cst(f64::MIN_POSITIVE) || !best.is_finite() {
            return Err(LinalgError::Singular {
                pivot: best.as_f64(),
                step: k,
            });
        }
        if p != k {
            perm.swap(k, p);
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[p, j]];
                lu[[p, j]] = tmp;
            }
        }
        max_piv = max_piv.max(best);
        min_piv = min_piv.min(best);
        let piv = lu[[k, k]];
        for i in k + 1..n {
            let factor = lu[[i, k]] / piv;
            lu[[i, k]] = factor;
            for j in k + 1..n {
                let sub = factor * lu[[k, j]];
                lu[[i, j]] -= sub;
            }
        }
    }
    Ok(LuFactors {
        lu,
        perm,
        pivot_ratio: min_piv / max_piv,
    })
}

impl<S: Scalar> LuFactors<S> {
    pub fn solve(&self, b: &Array1<S>) -> Result<Array1<S>, LinalgError> {
        let n = self.lu.nrows();
        if b.len() != n {
            return Err(LinalgError::RhsLength { n, len: b.len() });
        }
        let mut y = Array1::zeros(n);
        for i in 0..n {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc = acc - self.lu[[i, j]] * y[j];
            }
            y[i] = acc;
        }
        let mut x = Array1::zeros(n);
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc = acc - self.lu[[i, j]] * x[j];
            }
            x[i] = acc / self.lu[[i, i]];
        }
        Ok(x)
    }
}

/// Solve `a x = b` in one shot.
pub fn lu_solve<S: Scalar>(a: &Array2<S>, b: &Array1<S>) -> Result<Array1<S>, LinalgError> {
    lu_factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn solves_small_system() {
        let a = array![[2.0, 1.0], [1.0, 3.0]];
        let b = array![3.0, 5.0];
        let x = lu_solve(&a, &b).unwrap();
        assert_abs_diff_eq!(x[0], 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(x[1], 1.4, epsilon = 1e-14);
    }

    #[test]
    fn pivots_on_zero_diagonal() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        let b = array![2.0, 7.0];
        let x = lu_solve(&a, &b).unwrap();
        assert_abs_diff_eq!(x[0], 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn detects_singularity() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(
            lu_factor(&a),
            Err(LinalgError::Singular { .. })
        ));
    }

    #[test]
    fn rejects_non_square() {
        let a = Array2::<f64>::zeros((2, 3));
        assert!(matches!(lu_factor(&a), Err(LinalgError::NotSquare { .. })));
    }
}
