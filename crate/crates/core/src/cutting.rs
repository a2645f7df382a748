//! LP solves with second-order-cone constraints enforced by cutting planes.
//!
//! A constraint `a·v + offset ∈ SOC` (optionally with a margin variable,
//! `g(a·v + offset) + v[margin] ≤ 0` for `g(w) = ‖tail(w)‖ - w_0`) is outer-
//! approximated by halfspaces. At an infeasible iterate the violated cone is
//! cut with the subgradient of `g` there, which is the reflected unit normal
//! `R ŵ / ‖R ŵ‖` of the cone boundary at the projection ŵ of the iterate.
//! Seed cuts along the tail axes plus an artificial variable box keep every
//! intermediate LP bounded; a box row active at the final point is reported
//! as genuine unboundedness.

use ndarray::{Array1, Array2};

use crate::linalg::norm2;
use crate::lp::{solve_lp_with, LpError, LpProblem, LpSolution, LpStatus};
use crate::options::Tolerances;
use crate::scalar::Scalar;

/// `g(a·v + offset) + v[margin_col] ≤ 0` with `g(w) = ‖(w_1..)‖ - w_0`.
#[derive(Debug, Clone)]
pub struct SocConstraint<S> {
    pub a: Array2<S>,
    pub offset: Array1<S>,
    pub margin_col: Option<usize>,
}

/// A generated cut, kept with its provenance so callers can map active cuts
/// back to cone normals.
#[derive(Debug, Clone)]
pub struct Cut<S> {
    /// Index of the [`SocConstraint`] that produced the cut.
    pub source: usize,
    /// Unit normal in the cone's residual space.
    pub normal: Array1<S>,
    /// Row over the LP variables.
    pub coeffs: Array1<S>,
    pub rhs: S,
}

#[derive(Debug)]
pub struct CutSolve<S> {
    pub status: LpStatus,
    pub solution: LpSolution<S>,
    pub cuts: Vec<Cut<S>>,
    /// Worst cone violation at the returned point.
    pub violation: S,
}

impl<S: Scalar> SocConstraint<S> {
    fn violation(&self, v: &Array1<S>) -> S {
        let w = self.a.dot(v) + &self.offset;
        let g = norm2(w.slice(ndarray::s![1..])) - w[0];
        match self.margin_col {
            Some(mc) => g + v[mc],
            None => g,
        }
    }

    /// Subgradient cut of `g` at the current iterate. The normal is the
    /// reflected boundary normal when the tail is nonzero and the apex
    /// supporting halfspace `-w_0 ≤ 0` otherwise.
    fn cut_at(&self, source: usize, v: &Array1<S>) -> Cut<S> {
        let w = self.a.dot(v) + &self.offset;
        let k = w.len();
        let tail_norm = norm2(w.slice(ndarray::s![1..]));
        let mut grad = Array1::zeros(k);
        grad[0] = -S::one();
        let scale = if tail_norm > S::cst(1e-300) {
            for j in 1..k {
                grad[j] = w[j] / tail_norm;
            }
            S::cst(2.0).sqrt()
        } else {
            S::one()
        };
        let normal = grad.mapv(|x| x / scale);
        let mut coeffs = self.a.t().dot(&normal);
        if let Some(mc) = self.margin_col {
            coeffs[mc] += S::one() / scale;
        }
        let rhs = -normal.dot(&self.offset);
        Cut {
            source,
            normal,
            coeffs,
            rhs,
        }
    }

    /// Axis-aligned seed cuts `(-1, ±e_j)/√2`, valid for every SOC point.
    fn seed_cuts(&self, source: usize) -> Vec<Cut<S>> {
        let k = self.offset.len();
        let scale = S::cst(2.0).sqrt();
        let mut cuts = Vec::with_capacity(2 * (k - 1));
        for j in 1..k {
            for sign in [S::one(), -S::one()] {
                let mut normal = Array1::zeros(k);
                normal[0] = -S::one() / scale;
                normal[j] = sign / scale;
                let mut coeffs = self.a.t().dot(&normal);
                if let Some(mc) = self.margin_col {
                    coeffs[mc] += S::one() / scale;
                }
                let rhs = -normal.dot(&self.offset);
                cuts.push(Cut {
                    source,
                    normal,
                    coeffs,
                    rhs,
                });
            }
        }
        cuts
    }
}

/// Minimize `c^T v` over linear rows plus SOC constraints.
pub fn solve_with_cuts<S: Scalar>(
    c: &Array1<S>,
    a_ub: &Array2<S>,
    b_ub: &Array1<S>,
    soc: &[SocConstraint<S>],
    tol: &Tolerances,
) -> Result<CutSolve<S>, LpError> {
    let nv = c.len();
    if soc.is_empty() {
        let p = LpProblem::new(c.clone(), a_ub.clone(), b_ub.clone());
        let solution = solve_lp_with(&p, &tol.lp_options())?;
        return Ok(CutSolve {
            status: solution.status,
            solution,
            cuts: vec![],
            violation: S::zero(),
        });
    }

    let mut cuts: Vec<Cut<S>> = Vec::new();
    for (s, con) in soc.iter().enumerate() {
        cuts.extend(con.seed_cuts(s));
    }

    let bound = S::cst(tol.box_bound);
    let base_rows = a_ub.nrows();
    let cut_tol = S::cst(tol.cut_tol);

    loop {
        let total = base_rows + 2 * nv + cuts.len();
        let mut g = Array2::zeros((total, nv));
        let mut h = Array1::zeros(total);
        for i in 0..base_rows {
            g.row_mut(i).assign(&a_ub.row(i));
            h[i] = b_ub[i];
        }
        for j in 0..nv {
            g[[base_rows + 2 * j, j]] = S::one();
            h[base_rows + 2 * j] = bound;
            g[[base_rows + 2 * j + 1, j]] = -S::one();
            h[base_rows + 2 * j + 1] = bound;
        }
        for (i, cut) in cuts.iter().enumerate() {
            g.row_mut(base_rows + 2 * nv + i).assign(&cut.coeffs);
            h[base_rows + 2 * nv + i] = cut.rhs;
        }
        let p = LpProblem::new(c.clone(), g, h);
        let solution = solve_lp_with(&p, &tol.lp_options())?;
        if solution.status != LpStatus::Optimal {
            return Ok(CutSolve {
                status: solution.status,
                solution,
                cuts,
                violation: S::infinity(),
            });
        }

        let mut worst: Option<(usize, S)> = None;
        for (s, con) in soc.iter().enumerate() {
            let viol = con.violation(&solution.x);
            if worst.map_or(true, |(_, w)| viol > w) {
                worst = Some((s, viol));
            }
        }
        let (worst_idx, worst_viol) = worst.expect("at least one SOC constraint");

        if worst_viol <= cut_tol {
            // Converged; an active artificial box row means the genuine
            // problem is unbounded.
            let on_box = solution
                .x
                .iter()
                .any(|&xj| (xj.abs() - bound).abs() <= S::cst(tol.tol_feas) * (S::one() + bound));
            let status = if on_box {
                LpStatus::Unbounded
            } else {
                LpStatus::Optimal
            };
            return Ok(CutSolve {
                status,
                solution,
                cuts,
                violation: worst_viol,
            });
        }

        if cuts.len() >= tol.max_cuts + 2 * (soc.len()) * (soc[0].offset.len().saturating_sub(1)) {
            return Ok(CutSolve {
                status: LpStatus::NumericalFailure,
                solution,
                cuts,
                violation: worst_viol,
            });
        }
        cuts.push(soc[worst_idx].cut_at(worst_idx, &solution.x));
    }
}
