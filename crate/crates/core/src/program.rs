//! Nominal conic programs `min c^T x + d  s.t.  A_i x - b_i ∈ Q_i` and their
//! exact nominal solve.
//!
//! Orthant and polyhedral blocks reduce to linear rows; second-order-cone
//! blocks are solved by the cutting-plane loop in [`crate::cutting`].

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::cones::{Cone, ConeError};
use crate::cutting::{solve_with_cuts, SocConstraint};
use crate::linalg::norm_inf;
use crate::lp::{LpError, LpStatus};
use crate::options::Tolerances;
use crate::scalar::Scalar;
use crate::uncertainty::{SetError, UncertaintySet};

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error("block {block}: {source}")]
    Cone { block: usize, source: ConeError },
    #[error("block {block} uncertainty: {source}")]
    Set { block: usize, source: SetError },
    #[error("block {block}: A is {rows}x{cols}, expected {exp_rows}x{exp_cols}")]
    BlockShape {
        block: usize,
        rows: usize,
        cols: usize,
        exp_rows: usize,
        exp_cols: usize,
    },
    #[error("non-finite data in block {block}")]
    NonFinite { block: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// One conic constraint block `A x - b ∈ cone` with its uncertainty set.
#[derive(Debug, Clone)]
pub struct Block<S> {
    pub a: Array2<S>,
    pub b: Array1<S>,
    pub cone: Cone<S>,
    pub uncertainty: UncertaintySet<S>,
}

impl<S: Scalar> Block<S> {
    /// `A x̄ - b`.
    pub fn residual(&self, x: &Array1<S>) -> Array1<S> {
        self.a.dot(x) - &self.b
    }

    /// Active-set tolerance scaled to this block's right-hand side.
    pub fn tol_act(&self, tol: &Tolerances) -> S {
        S::cst(tol.tol_act) * (S::one() + norm_inf(self.b.view()))
    }
}

/// `min c^T x + d  s.t.  A_i x - b_i ∈ Q_i` for every block `i`.
#[derive(Debug, Clone)]
pub struct ConicProgram<S> {
    pub c: Array1<S>,
    pub d: S,
    pub blocks: Vec<Block<S>>,
}

impl<S: Scalar> ConicProgram<S> {
    pub fn nvars(&self) -> usize {
        self.c.len()
    }

    pub fn validate(&self) -> Result<(), ProgramError> {
        let n = self.nvars();
        if !self.c.iter().all(|x| x.is_finite()) || !self.d.is_finite() {
            return Err(ProgramError::NonFinite { block: usize::MAX });
        }
        for (i, blk) in self.blocks.iter().enumerate() {
            let k = blk.cone.dim();
            if blk.a.nrows() != k || blk.a.ncols() != n || blk.b.len() != k {
                return Err(ProgramError::BlockShape {
                    block: i,
                    rows: blk.a.nrows(),
                    cols: blk.a.ncols(),
                    exp_rows: k,
                    exp_cols: n,
                });
            }
            if !blk.a.iter().all(|x| x.is_finite()) || !blk.b.iter().all(|x| x.is_finite()) {
                return Err(ProgramError::NonFinite { block: i });
            }
            blk.uncertainty
                .validate_compact_convex()
                .map_err(|source| ProgramError::Set { block: i, source })?;
            if blk.uncertainty.residual_dim() != k || blk.uncertainty.ncols() != n {
                return Err(ProgramError::Set {
                    block: i,
                    source: SetError::DimensionMismatch {
                        context: "uncertainty shape vs block",
                        expected: k,
                        got: blk.uncertainty.residual_dim(),
                    },
                });
            }
        }
        Ok(())
    }

    /// Linear rows `G x ≤ h` equivalent to the orthant/polyhedral blocks.
    /// Second-order-cone blocks are returned separately.
    pub fn linear_rows(&self) -> (Array2<S>, Array1<S>, Vec<usize>) {
        let n = self.nvars();
        let mut rows: Vec<Array1<S>> = Vec::new();
        let mut rhs: Vec<S> = Vec::new();
        let mut soc_blocks = Vec::new();
        for (i, blk) in self.blocks.iter().enumerate() {
            match &blk.cone {
                Cone::OrthantNonpositive { dim } => {
                    for j in 0..*dim {
                        rows.push(blk.a.row(j).to_owned());
                        rhs.push(blk.b[j]);
                    }
                }
                Cone::Polyhedral { rows: vrows, .. } => {
                    for v in vrows {
                        rows.push(blk.a.t().dot(v));
                        rhs.push(v.dot(&blk.b));
                    }
                }
                Cone::SecondOrderCone { .. } => soc_blocks.push(i),
            }
        }
        let mut g = Array2::zeros((rows.len(), n));
        for (i, r) in rows.iter().enumerate() {
            g.row_mut(i).assign(r);
        }
        (g, Array1::from(rhs), soc_blocks)
    }
}

#[derive(Debug, Clone)]
pub struct NominalSolution<S> {
    pub status: LpStatus,
    pub xbar: Array1<S>,
    /// `c^T x̄ + d`.
    pub value: S,
    /// Per block, the indices of its defining inequalities tight at `x̄`
    /// (orthant/polyhedral rows; a second-order cone reports index 0 when
    /// the residual sits on the cone boundary).
    pub active: Vec<Vec<usize>>,
}

/// Solve the nominal problem exactly (LP) or by cutting planes when
/// second-order-cone blocks are present.
pub fn solve_nominal<S: Scalar>(
    p: &ConicProgram<S>,
    tol: &Tolerances,
) -> Result<NominalSolution<S>, ProgramError> {
    p.validate()?;
    let (g, h, soc_blocks) = p.linear_rows();
    let soc: Vec<SocConstraint<S>> = soc_blocks
        .iter()
        .map(|&i| SocConstraint {
            a: p.blocks[i].a.clone(),
            offset: p.blocks[i].b.mapv(|x| -x),
            margin_col: None,
        })
        .collect();
    let out = solve_with_cuts(&p.c, &g, &h, &soc, tol)?;
    let status = out.status;
    if status != LpStatus::Optimal {
        return Ok(NominalSolution {
            status,
            xbar: Array1::zeros(p.nvars()),
            value: S::nan(),
            active: vec![],
        });
    }
    let xbar = out.solution.x;
    let value = p.c.dot(&xbar) + p.d;
    let active = block_activity(p, &xbar, tol);
    Ok(NominalSolution {
        status,
        xbar,
        value,
        active,
    })
}

/// Which defining inequalities of each block are tight at `x`.
pub fn block_activity<S: Scalar>(
    p: &ConicProgram<S>,
    x: &Array1<S>,
    tol: &Tolerances,
) -> Vec<Vec<usize>> {
    p.blocks
        .iter()
        .map(|blk| {
            let z = blk.residual(x);
            let t = blk.tol_act(tol);
            match &blk.cone {
                Cone::OrthantNonpositive { dim } => {
                    (0..*dim).filter(|&j| z[j].abs() <= t).collect()
                }
                Cone::Polyhedral { rows, .. } => rows
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| {
                        (v.dot(&z) / crate::linalg::norm2(v.view())).abs() <= t
                    })
                    .map(|(j, _)| j)
                    .collect(),
                Cone::SecondOrderCone { .. } => {
                    let tail = crate::linalg::norm2(z.slice(ndarray::s![1..]));
                    if (tail - z[0]).abs() <= t {
                        vec![0]
                    } else {
                        vec![]
                    }
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn degen_program() -> ConicProgram<f64> {
        ConicProgram {
            c: array![0.0, 1.0],
            d: 0.0,
            blocks: vec![Block {
                a: array![[-1.0, -1.0], [1.0, -1.0], [0.5, -1.0]],
                b: Array1::zeros(3),
                cone: Cone::orthant(3).unwrap(),
                uncertainty: UncertaintySet::BVertexPolytope {
                    ncols: 2,
                    vertices: vec![array![0.0, 4.0, 0.0], array![0.0, -4.0, 0.0]],
                },
            }],
        }
    }

    #[test]
    fn nominal_degen_solves_to_origin() {
        let p = degen_program();
        let sol = solve_nominal(&p, &Tolerances::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.xbar[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.xbar[1], 0.0, epsilon = 1e-12);
        assert_eq!(sol.active, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn nominal_square_eg_solves_to_origin() {
        let p = ConicProgram {
            c: array![0.0, 0.0, 1.0],
            d: 0.0,
            blocks: vec![Block {
                a: Array2::eye(3),
                b: Array1::zeros(3),
                cone: Cone::polyhedral(
                    3,
                    vec![
                        array![1.0, 0.0, -1.0],
                        array![-1.0, 0.0, -1.0],
                        array![0.0, 1.0, -1.0],
                        array![0.0, -1.0, -1.0],
                    ],
                )
                .unwrap(),
                uncertainty: UncertaintySet::zero(3, 3),
            }],
        };
        let sol = solve_nominal(&p, &Tolerances::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        for j in 0..3 {
            assert_abs_diff_eq!(sol.xbar[j], 0.0, epsilon = 1e-12);
        }
        assert_eq!(sol.active, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn nominal_soc_block_solved_by_cuts() {
        // min x1 - 0.8 x2 s.t. (x1, x2, 0.8) ∈ SOC, x2 ≤ 0.6.
        let p = ConicProgram {
            c: array![1.0, -0.8],
            d: 0.0,
            blocks: vec![
                Block {
                    a: array![[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
                    b: array![0.0, 0.0, -0.8],
                    cone: Cone::soc(3).unwrap(),
                    uncertainty: UncertaintySet::zero(3, 2),
                },
                Block {
                    a: array![[0.0, 1.0]],
                    b: array![0.6],
                    cone: Cone::orthant(1).unwrap(),
                    uncertainty: UncertaintySet::zero(1, 2),
                },
            ],
        };
        let sol = solve_nominal(&p, &Tolerances::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.xbar[0], 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.xbar[1], 0.6, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.value, 1.0 - 0.48, epsilon = 1e-7);
        assert_eq!(sol.active, vec![vec![0], vec![0]]);
    }

    #[test]
    fn validation_rejects_mismatched_uncertainty() {
        let mut p = degen_program();
        p.blocks[0].uncertainty = UncertaintySet::zero(2, 2);
        assert!(matches!(p.validate(), Err(ProgramError::Set { .. })));
    }
}
